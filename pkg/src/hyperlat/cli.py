"""Command line interface.

Every subcommand prints a header line echoing the flags it ran with, then
CSV (or a labelled text block for the structural commands).  All numeric
output that is not exactly rational uses 12 significant digits; exact
rationals are printed as num/den.  Identical flags and seed give
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .cusps import find_isotropic_planes
from .densities import (
    eisenstein_coefficient,
    local_density,
    ENUMERATION_GUARD,
)
from .fqm import discriminant_group
from .hyperboloid import Window, equidistribution_run, splitting_frame
from .lattices import (
    IntegerLattice,
    direct_sum,
    e8,
    hyperbolic_plane,
    k3_lattice,
    load_lattice,
    rank1,
)
from .predict import (
    PredictionInput,
    degree_prediction,
    k3_predict,
    predict_count,
)
from .qseries import theta_series
from .weil import WeilAction, dump_matrix, rho_S, rho_T, verify_relations


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return f"{float(x):.12g}"


def parse_lattice_spec(spec: str) -> IntegerLattice:
    """Either a JSON file path or a '+'-joined list of named blocks."""
    named = {"U": hyperbolic_plane, "E8": lambda: e8(1),
             "E8(-1)": lambda: e8(-1), "K3": k3_lattice}
    try:
        parts = []
        for tok in spec.split("+"):
            tok = tok.strip()
            if tok in named:
                parts.append(named[tok]())
            elif tok.startswith("rank1(") and tok.endswith(")"):
                parts.append(rank1(int(tok[6:-1])))
            else:
                raise KeyError(tok)
        return parts[0] if len(parts) == 1 else direct_sum(*parts)
    except KeyError:
        return load_lattice(spec)


def parse_gamma(text: str | None):
    if not text:
        return None
    return tuple(int(x) for x in text.split(","))


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _header(args, keys) -> str:
    parts = [f"{k.replace('_', '-')}={getattr(args, k)}" for k in keys]
    return "# " + " ".join(parts)


def cmd_lattice(args, out):
    L = parse_lattice_spec(args.lattice)
    print(_header(args, ["lattice"]), file=out)
    sig = L.signature()
    print(f"name,{L.name or ''}", file=out)
    print(f"rank,{L.rank}", file=out)
    print(f"det,{L.det}", file=out)
    print(f"signature,({sig.positive},{sig.negative})", file=out)
    for row in L.gram:
        print("gram," + ",".join(str(x) for x in row), file=out)
    return 0


def cmd_fqm(args, out):
    L = parse_lattice_spec(args.lattice)
    print(_header(args, ["lattice"]), file=out)
    print(discriminant_group(L).dump_text(), file=out)
    return 0


def cmd_weil(args, out):
    L = parse_lattice_spec(args.lattice)
    D = discriminant_group(L)
    w = WeilAction(D, L.signature(), dual=args.dual)
    print(_header(args, ["lattice", "dual"]), file=out)
    report = verify_relations(w)
    print(f"# relations unitarity={report['unitarity']:.3e} "
          f"braid={report['braid']:.3e} t_order={report['t_order']:.3e} "
          f"level={report['level']}", file=out)
    print("matrix,T", file=out)
    print(dump_matrix(rho_T(w)), file=out)
    print("matrix,S", file=out)
    print(dump_matrix(rho_S(w)), file=out)
    return 0


def cmd_theta(args, out):
    L = parse_lattice_spec(args.lattice)
    series = theta_series(L, Fraction(args.order))
    print(_header(args, ["lattice", "order"]), file=out)
    print(series.dump_csv(), file=out)
    return 0


def cmd_cusp(args, out):
    L = parse_lattice_spec(args.lattice)
    data = find_isotropic_planes(L, args.bound)
    print(_header(args, ["lattice", "bound"]), file=out)
    print("index,plane_rows,imprimitivity,kf_gram,strongly_primitive,det_identity",
          file=out)
    for i, d in enumerate(data):
        rows = ";".join(" ".join(str(x) for x in r) for r in d.plane_basis)
        kf = ";".join(" ".join(str(x) for x in r) for r in d.kf_lattice.gram)
        det_ok = abs(L.det) == abs(d.kf_lattice.det) * d.imprimitivity ** 2
        print(f"{i},{rows},{d.imprimitivity},{kf},"
              f"{d.strongly_primitive},{det_ok}", file=out)
    return 0


def cmd_density(args, out):
    L = parse_lattice_spec(args.lattice)
    gamma = parse_gamma(args.gamma)
    n = parse_fraction(args.n)
    rep = local_density(gamma, n, L, args.prime, s_max=args.smax,
                        guard=args.guard)
    print(_header(args, ["lattice", "gamma", "n", "prime", "smax"]), file=out)
    print("prime,s0,density,raw_counts", file=out)
    raw = ";".join(str(c) for c in rep.raw_counts)
    print(f"{rep.prime},{rep.stabilization_exponent},{_fmt(rep.density)},{raw}",
          file=out)
    return 0


def cmd_eis(args, out):
    L = parse_lattice_spec(args.lattice)
    gamma = parse_gamma(args.gamma)
    D = discriminant_group(L)
    gamma = D.zero if gamma is None else D.reduce(gamma)
    print(_header(args, ["lattice", "gamma", "nmax", "prime_bound"]), file=out)
    print("gamma_index,n_num,n_den,c_value,prime_bound,local_factors", file=out)
    gamma_index = D.elements().index(gamma)
    frac = (-D.q_value(gamma)) % 1
    n = frac if frac > 0 else Fraction(1)
    while n <= args.nmax:
        c = eisenstein_coefficient(gamma, n, L, args.prime_bound,
                                   guard=args.guard)
        factors = ""
        if c.series is not None:
            factors = ";".join(f"{p}={r.density.numerator}/{r.density.denominator}"
                               for p, r in sorted(c.series.factors.items()))
        val = _fmt(c.exact) if c.exact is not None else _fmt(c.value)
        print(f"{gamma_index},{n.numerator},{n.denominator},{val},"
              f"{args.prime_bound},{factors}", file=out)
        n += 1
    return 0


def cmd_count(args, out):
    L = parse_lattice_spec(args.lattice)
    gamma = parse_gamma(args.gamma)
    frame = splitting_frame(L)
    window = Window(frame, Fraction(args.rho))
    summary = equidistribution_run(
        L, gamma, window, Fraction(args.nmin), Fraction(args.nmax),
        prime_bound=args.prime_bound, samples=args.samples, seed=args.seed,
        workers=args.workers)
    print(_header(args, ["lattice", "gamma", "rho", "nmin", "nmax",
                         "prime_bound", "seed", "workers", "samples"]), file=out)
    print("n,empirical,predicted,ratio,mu_infty,ss_truncated,grazing_count",
          file=out)
    for r in summary.reports:
        print(f"{_fmt(r.n)},{r.empirical},{_fmt(r.predicted)},{_fmt(r.ratio)},"
              f"{_fmt(r.mu_infty_value)},{_fmt(r.series_value)},{r.grazing}",
              file=out)
    for n, reason in summary.skipped:
        print(f"# skipped n={_fmt(n)}: {reason}", file=out)
    print(f"# mean_ratio={_fmt(summary.mean_ratio)} "
          f"first_half={_fmt(summary.first_half_mean)} "
          f"second_half={_fmt(summary.second_half_mean)}", file=out)
    return 0


def cmd_predict(args, out):
    L = parse_lattice_spec(args.lattice)
    gamma = parse_gamma(args.gamma)
    D = discriminant_group(L)
    gamma = D.zero if gamma is None else D.reduce(gamma)
    boundary = ()
    if args.boundary:
        planes = find_isotropic_planes(L, args.cusp_bound)
        pairs = []
        for part in args.boundary.split(";"):
            idx, deg = part.split(":")
            pairs.append((planes[int(idx)], int(deg)))
        boundary = tuple(pairs)
    inp = PredictionInput(L, gamma, parse_fraction(args.n), args.mu_s,
                          boundary_degrees=boundary,
                          prime_bound=args.prime_bound)
    print(_header(args, ["lattice", "gamma", "n", "mu_s", "prime_bound",
                         "boundary"]), file=out)
    if boundary:
        result, rows = degree_prediction(inp, guard=args.guard)
        print("value,error_order,representable", file=out)
        print(f"{_fmt(result.value)},{result.error_order},{result.representable}",
              file=out)
        print("# cusp corrections", file=out)
        for row in rows:
            print(f"# u={_fmt(float(row['u']))} degree={row['degree']} "
                  f"order={row['sharper_order']}", file=out)
    else:
        result = predict_count(inp, guard=args.guard)
        print("value,error_order,representable", file=out)
        print(f"{_fmt(result.value)},{result.error_order},{result.representable}",
              file=out)
    return 0


def cmd_k3(args, out):
    gamma = parse_gamma(args.gamma)
    rows = None
    if args.p_rows:
        rows = [[int(x) for x in row.split(",")] for row in args.p_rows.split(";")]
    res = k3_predict(gamma, parse_fraction(args.n), args.mu_s,
                     two_d=args.two_d, rows=rows,
                     prime_bound=args.prime_bound, guard=args.guard)
    print(_header(args, ["two_d", "gamma", "n", "mu_s", "prime_bound"]), file=out)
    print("rho,exponent,value,representable_2n,exact_test,disc_match", file=out)
    rep = res.coset_representable
    print(f"{res.rho},{_fmt(res.exponent)},{_fmt(res.prediction.value)},"
          f"{rep.representable},{rep.exact},{res.disc_match}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hyperlat",
        description="Exact lattice invariants and hyperboloid point counts")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, prime_bound=True):
        sp.add_argument("--guard", type=int, default=ENUMERATION_GUARD,
                        help="enumeration guard for exact counters")
        if prime_bound:
            sp.add_argument("--prime-bound", dest="prime_bound", type=int,
                            default=100)

    sp = sub.add_parser("lattice", help="inspect a lattice")
    sp.add_argument("--lattice", required=True)
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("fqm", help="discriminant group with Q values")
    sp.add_argument("--lattice", required=True)
    sp.set_defaults(func=cmd_fqm)

    sp = sub.add_parser("weil", help="Weil representation matrices")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--dual", action="store_true")
    sp.set_defaults(func=cmd_weil)

    sp = sub.add_parser("theta", help="theta series of a definite lattice")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--order", required=True)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("cusp", help="primitive isotropic planes and cusp data")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--bound", type=int, default=1)
    sp.set_defaults(func=cmd_cusp)

    sp = sub.add_parser("density", help="one local density with witnesses")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("--n", required=True)
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--smax", type=int, default=None)
    add_common(sp, prime_bound=False)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("eis", help="Eisenstein coefficients over a range")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("--nmax", type=int, required=True)
    add_common(sp)
    sp.set_defaults(func=cmd_eis)

    sp = sub.add_parser("count", help="equidistribution experiment")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--nmin", required=True)
    sp.add_argument("--nmax", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--samples", type=int, default=10 ** 6)
    add_common(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("predict", help="predicted count for one (gamma, n)")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--gamma", default="")
    sp.add_argument("--n", required=True)
    sp.add_argument("--mu-s", dest="mu_s", type=float, required=True)
    sp.add_argument("--boundary", default="",
                    help="cusp corrections 'index:degree;...' over planes "
                         "found at --cusp-bound")
    sp.add_argument("--cusp-bound", dest="cusp_bound", type=int, default=1)
    add_common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("k3", help="rank-22 unimodular specialization")
    sp.add_argument("--two-d", dest="two_d", type=int, default=None)
    sp.add_argument("--p-rows", dest="p_rows", default="",
                    help="explicit sublattice rows 'a,b,...;c,d,...'")
    sp.add_argument("--gamma", default="")
    sp.add_argument("--n", required=True)
    sp.add_argument("--mu-s", dest="mu_s", type=float, required=True)
    add_common(sp)
    sp.set_defaults(func=cmd_k3)

    return p


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, out or sys.stdout)


if __name__ == "__main__":
    raise SystemExit(main())
