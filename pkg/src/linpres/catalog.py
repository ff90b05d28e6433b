"""Named matrix subspaces, each built from one generator per free parameter.

Indices are 0-based throughout: ``E(n, 0, 2)`` is the elementary matrix with
a 1 in the first row, third column.
"""

from __future__ import annotations

import re

import numpy as np

from .field import FieldTable, GF2
from . import matrix as mx
from .subspace import AmbientMismatchError, Subspace, span


class WrongFieldError(ValueError):
    pass


def E(n: int, i: int, j: int, p: int | None = None) -> np.ndarray:
    return mx.elementary(n, i, j, p)


def _from_generators(F, gens, shape):
    return span(F, [mx.vec(g) for g in gens], shape) if gens else Subspace.zero(F, shape)


def _summed(F, n, *positions):
    m = mx.zeros(n)
    for i, j in positions:
        m[i, j] = F.add_table[m[i, j], 1]
    return m


def line(F: FieldTable, x) -> Subspace:
    x = np.asarray(x, dtype=np.uint8)
    if not x.any():
        raise ValueError("a line needs a nonzero spanning vector")
    return span(F, [x], len(x))


def _spanning_vector(D):
    if isinstance(D, Subspace):
        if D.dim != 1:
            raise ValueError(f"{D!r} is not a line")
        return D.basis[0]
    return np.asarray(D, dtype=np.uint8)


def M_D(D, F: FieldTable) -> Subspace:
    """Matrices whose kernel contains the line D."""
    x = _spanning_vector(D)
    n = len(x)
    # (Mx)_i = sum_j M_ij x_j, one linear form per row i
    forms = np.zeros((n, n * n), dtype=np.uint8)
    for i in range(n):
        forms[i, i * n:(i + 1) * n] = x
    ker = mx.kernel_basis(F, forms)
    return Subspace(F, (n, n), np.stack(ker))


def M_sup_D(D, F: FieldTable) -> Subspace:
    """Matrices whose image lies in the orthogonal hyperplane of D."""
    return M_D(D, F).transpose()


def R(s: int, t: int, n: int, p: int, F: FieldTable) -> Subspace:
    """Block space [[M, N], [P, 0]] with M of size s x t."""
    if not (0 <= s <= n and 0 <= t <= p):
        raise ValueError(f"need 0 <= s <= {n} and 0 <= t <= {p}")
    gens = [E(n, i, j, p) for i in range(n) for j in range(p) if i < s or j < t]
    return _from_generators(F, gens, (n, p))


def full_space(n: int, F: FieldTable) -> Subspace:
    return Subspace.full(F, (n, n))


def sl(n: int, F: FieldTable) -> Subspace:
    gens = [E(n, i, j) for i in range(n) for j in range(n) if i != j]
    for i in range(n - 1):
        m = E(n, i, i)
        m[n - 1, n - 1] = F.neg_table[1]
        gens.append(m)
    return _from_generators(F, gens, (n, n))


def T_upper(n: int, F: FieldTable) -> Subspace:
    gens = [E(n, i, j) for i in range(n) for j in range(i, n)]
    return _from_generators(F, gens, (n, n))


def H(n: int, F: FieldTable) -> Subspace:
    """[[M, C], [0, a]] with M square of order n - 1."""
    gens = [E(n, i, j) for i in range(n - 1) for j in range(n)] + [E(n, n - 1, n - 1)]
    return _from_generators(F, gens, (n, n))


def _need_f2(F):
    F = GF2 if F is None else F
    if F.q != 2:
        raise WrongFieldError(f"this space is defined over GF(2), not GF({F.q})")
    return F


def J3_F2(F=None) -> Subspace:
    """Lower triangular 3x3 matrices with diagonal (a, b, a + b)."""
    F = _need_f2(F)
    gens = [_summed(F, 3, (0, 0), (2, 2)), _summed(F, 3, (1, 1), (2, 2)),
            E(3, 1, 0), E(3, 2, 0), E(3, 2, 1)]
    return _from_generators(F, gens, (3, 3))


def V1_F2(F=None) -> Subspace:
    """[[M, C], [L, 0]]: everything but the (3,3) entry."""
    F = _need_f2(F)
    gens = [E(3, i, j) for i in range(3) for j in range(3) if (i, j) != (2, 2)]
    return _from_generators(F, gens, (3, 3))


def V2_F2(F=None) -> Subspace:
    """[[M, C], [L, a]] with M of trace zero."""
    F = _need_f2(F)
    gens = [_summed(F, 3, (0, 0), (1, 1)), E(3, 0, 1), E(3, 1, 0),
            E(3, 0, 2), E(3, 1, 2), E(3, 2, 0), E(3, 2, 1), E(3, 2, 2)]
    return _from_generators(F, gens, (3, 3))


def F_cal(F=None) -> Subspace:
    """[[0, 0, a], [0, 0, b], [c, d, e]]."""
    F = _need_f2(F)
    gens = [E(3, 0, 2), E(3, 1, 2), E(3, 2, 0), E(3, 2, 1), E(3, 2, 2)]
    return _from_generators(F, gens, (3, 3))


def G_cal(F=None) -> Subspace:
    """[[0, a, c], [0, 0, b], [a + b, d, e]]."""
    F = _need_f2(F)
    gens = [_summed(F, 3, (0, 1), (2, 0)), _summed(F, 3, (1, 2), (2, 0)),
            E(3, 0, 2), E(3, 2, 1), E(3, 2, 2)]
    return _from_generators(F, gens, (3, 3))


def all_lines(F: FieldTable, n: int) -> list[Subspace]:
    from .subspace import enumerate_subspaces
    return list(enumerate_subspaces(n, 1, F))


# name registry -------------------------------------------------------------

SPACE_NAMES = ("sl<n>", "v1", "v2", "j3", "f", "g", "t<n>+", "h_<n>", "m<n>",
               "m_d:<x1,..,xn>", "m^d:<x1,..,xn>", "r:<s>,<t>")


def space_from_name(name: str, F: FieldTable, n: int = 3) -> Subspace:
    """Resolve a CLI space name such as ``sl3``, ``t2+``, ``m_d:0,0,1``, ``r:1,1``."""
    s = name.strip().lower()
    fixed = {"v1": V1_F2, "v2": V2_F2, "j3": J3_F2, "f": F_cal, "g": G_cal}
    if s in fixed:
        return fixed[s](F)
    if m := re.fullmatch(r"sl(\d*)", s):
        return sl(int(m.group(1) or n), F)
    if m := re.fullmatch(r"t(\d*)\+", s):
        return T_upper(int(m.group(1) or n), F)
    if m := re.fullmatch(r"h_?(\d*|n)", s):
        g = m.group(1)
        return H(n if g in ("", "n") else int(g), F)
    if m := re.fullmatch(r"m(\d+)", s):
        return full_space(int(m.group(1)), F)
    if m := re.fullmatch(r"m(_d|\^d):([\d,\s]+)", s):
        x = [int(v) for v in m.group(2).split(",")]
        return (M_D if m.group(1) == "_d" else M_sup_D)(x, F)
    if m := re.fullmatch(r"r:(\d+),(\d+)", s):
        return R(int(m.group(1)), int(m.group(2)), n, n, F)
    raise KeyError(f"unknown space {name!r}; known forms: {', '.join(SPACE_NAMES)}")


__all__ = [
    "E", "line", "M_D", "M_sup_D", "R", "full_space", "sl", "T_upper", "H",
    "J3_F2", "V1_F2", "V2_F2", "F_cal", "G_cal", "all_lines", "space_from_name",
    "WrongFieldError", "AmbientMismatchError",
]
