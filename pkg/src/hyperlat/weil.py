"""Weil representation matrices on C[D] for a finite quadratic module D.

The action is determined by the standard generators of the metaplectic group:
T acts diagonally by e^(2 pi i Q(gamma)), S by the normalized finite Fourier
transform with the eighth-root scalar fixed by the ambient signature.
Matrices are double precision; every identity is checked to 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fqm import FiniteQuadraticModule
from .lattices import Signature

TOLERANCE = 1e-9


class WeilError(ValueError):
    pass


@dataclass(frozen=True)
class WeilAction:
    module: FiniteQuadraticModule
    signature: Signature
    dual: bool = False
    _elements: tuple = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_elements", tuple(self.module.elements()))

    @property
    def elements(self):
        return self._elements

    @property
    def dim(self) -> int:
        return len(self._elements)

    def index_of(self, elt) -> int:
        return self._elements.index(self.module.reduce(elt))


def rho_T(w: WeilAction) -> np.ndarray:
    """Diagonal action of the translation generator."""
    phases = np.array([complex(np.exp(2j * np.pi * float(w.module.q_value(e))))
                       for e in w.elements])
    m = np.diag(phases)
    return m.conj() if w.dual else m


def rho_S(w: WeilAction) -> np.ndarray:
    """Action of the inversion generator: scaled finite Fourier transform.

    The eighth root of unity i^((b- - b+)/2) is taken on the principal branch
    e^(i pi (b- - b+)/4).
    """
    d = w.dim
    sig = w.signature
    scalar = np.exp(1j * np.pi * (sig.negative - sig.positive) / 4) / np.sqrt(d)
    m = np.empty((d, d), dtype=complex)
    for a, ea in enumerate(w.elements):
        for b, eb in enumerate(w.elements):
            m[a, b] = np.exp(-2j * np.pi * float(w.module.bilinear(ea, eb)))
    m = scalar * m
    return m.conj() if w.dual else m


def verify_relations(w: WeilAction, tol: float = TOLERANCE) -> dict:
    """Check unitarity, S^2 = (ST)^3, and T^level = 1; raise on failure."""
    s = rho_S(w)
    t = rho_T(w)
    eye = np.eye(w.dim)
    dev_unitary = np.abs(s @ s.conj().T - eye).max()
    st = s @ t
    dev_braid = np.abs(s @ s - st @ st @ st).max()
    n = w.module.level
    tn = np.linalg.matrix_power(t, n) if n else eye
    dev_torder = np.abs(tn - eye).max()
    report = {
        "unitarity": float(dev_unitary),
        "braid": float(dev_braid),
        "t_order": float(dev_torder),
        "level": n,
        "tolerance": tol,
    }
    if max(dev_unitary, dev_braid, dev_torder) > tol:
        raise WeilError(f"metaplectic relations fail: {report}")
    return report


def pullback_matrix(w_big: WeilAction, w_small: WeilAction, projection: dict) -> np.ndarray:
    """Matrix of v_gamma -> sum of v_delta over delta with p(delta) = gamma.

    ``projection`` maps elements of the orthogonal of the glued subgroup (in
    the big module) to elements of the small module; built by
    fqm.quotient_with_projection.
    """
    m = np.zeros((w_big.dim, w_small.dim))
    small_index = {e: i for i, e in enumerate(w_small.elements)}
    for a, delta in enumerate(w_big.elements):
        if delta in projection:
            m[a, small_index[projection[delta]]] = 1.0
    return m


def pushforward_matrix(w_big: WeilAction, w_small: WeilAction, projection: dict) -> np.ndarray:
    """Matrix of v_delta -> v_{p(delta)} if delta is in the orthogonal, else 0."""
    m = np.zeros((w_small.dim, w_big.dim))
    small_index = {e: i for i, e in enumerate(w_small.elements)}
    for a, delta in enumerate(w_big.elements):
        if delta in projection:
            m[small_index[projection[delta]], a] = 1.0
    return m


def intertwining_defect(w_big: WeilAction, w_small: WeilAction, projection: dict) -> float:
    """max over g in {S, T} of ||rho_big(g) p* - p* rho_small(g)||_inf."""
    p = pullback_matrix(w_big, w_small, projection)
    out = 0.0
    for gen in (rho_S, rho_T):
        big = gen(w_big)
        small = gen(w_small)
        out = max(out, float(np.abs(big @ p - p @ small).max()))
    return out


def dump_matrix(m: np.ndarray) -> str:
    """Rows of re,im pairs, row-major, space separated."""
    lines = []
    for row in np.atleast_2d(m):
        lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines)
