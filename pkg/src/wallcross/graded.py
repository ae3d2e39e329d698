"""Truncated weight-graded modules over ``k[x_1..x_n]`` with positive weights.

A module is stored as finitely many weight components ``M_a`` (by dimension)
for ``a`` in a window ``[a_min, a_max]``, together with the matrices of
multiplication by each ``x_i``, ``M_a -> M_{a + w_i}``.

Window conventions:

* ``a_max`` is a horizon.  Nothing is known above it, so derived quantities
  are only reported for weights ``<= a_max``.
* With ``bounded_below=True`` (the default) the module vanishes below
  ``a_min``.  Otherwise weights below ``a_min`` are unknown as well, and
  Koszul data is only certified on ``[a_min + sum(w), a_max]``.

Missing action matrices mean the zero map.  Scalars are ``Fraction``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .exact import Matrix, matmul, rank, zeros

UNKNOWN = None  # third truth value of weights_concentrated_in


class ModuleFormatError(ValueError):
    """Malformed module data; ``path`` locates the offending entry."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _freeze_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class TruncatedGradedModule:
    var_weights: tuple[int, ...]
    window: tuple[int, int]
    components: Mapping[int, int]
    actions: Mapping[int, Mapping[int, tuple]] = field(default_factory=dict)
    bounded_below: bool = True

    def __post_init__(self):
        vw = tuple(int(w) for w in self.var_weights)
        lo, hi = (int(x) for x in self.window)
        comps = {int(a): int(d) for a, d in self.components.items() if int(d) != 0}
        acts: dict[int, dict[int, tuple]] = {}
        for i, per in self.actions.items():
            for a, mat in per.items():
                mat = _freeze_matrix(mat)
                if any(x != 0 for row in mat for x in row):
                    acts.setdefault(int(i), {})[int(a)] = mat
        object.__setattr__(self, "var_weights", vw)
        object.__setattr__(self, "window", (lo, hi))
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        object.__setattr__(self, "actions", {i: dict(sorted(p.items())) for i, p in sorted(acts.items())})

    # value semantics over the normalized data
    def __eq__(self, other):
        if not isinstance(other, TruncatedGradedModule):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(repr(self._key()))

    def _key(self):
        return (
            self.var_weights,
            self.window,
            tuple(self.components.items()),
            tuple((i, tuple(p.items())) for i, p in self.actions.items()),
            self.bounded_below,
        )

    @property
    def n(self) -> int:
        return len(self.var_weights)

    @property
    def a_min(self) -> int:
        return self.window[0]

    @property
    def a_max(self) -> int:
        return self.window[1]

    def known(self, a: int) -> bool:
        if a > self.a_max:
            return False
        return self.bounded_below or a >= self.a_min

    def dim(self, a: int) -> int:
        if not self.known(a):
            raise KeyError(f"weight {a} is outside the known range of the module")
        return self.components.get(a, 0)

    def action(self, i: int, a: int) -> Matrix:
        """Matrix of ``x_i`` from ``M_a`` to ``M_{a + w_i}``."""
        src, dst = self.dim(a), self.dim(a + self.var_weights[i])
        mat = self.actions.get(i, {}).get(a)
        if mat is None:
            return zeros(dst, src)
        return [list(row) for row in mat]

    def weights(self) -> list[int]:
        return list(self.components)

    def total_dim(self) -> int:
        return sum(self.components.values())

    def same_module(self, other: TruncatedGradedModule) -> bool:
        """Equal as bounded-below modules up to the same horizon.

        The lower window edge is immaterial when both vanish below it.
        """
        if not (self.bounded_below and other.bounded_below):
            return self == other
        return (
            self.var_weights == other.var_weights
            and self.a_max == other.a_max
            and self.components == other.components
            and self.actions == other.actions
        )


def _mat_shape_ok(mat, rows: int, cols: int) -> bool:
    if rows == 0:
        return len(mat) == 0 or all(len(r) == 0 for r in mat)
    return len(mat) == rows and all(len(r) == cols for r in mat)


def validate_module(m: TruncatedGradedModule) -> list[str]:
    """All violated invariants; an empty list means the module is valid."""
    out = []
    if any(w <= 0 for w in m.var_weights):
        out.append(f"variable weights must be positive: {list(m.var_weights)}")
        return out
    lo, hi = m.window
    for a, d in m.components.items():
        if not lo <= a <= hi:
            out.append(f"component at weight {a} outside window [{lo}, {hi}]")
        if d < 0:
            out.append(f"negative dimension at weight {a}")
    for i, per in m.actions.items():
        if not 0 <= i < m.n:
            out.append(f"action for unknown variable {i}")
            continue
        for a, mat in per.items():
            b = a + m.var_weights[i]
            if not (lo <= a and b <= hi):
                out.append(f"action x{i} at weight {a} leaves the window")
                continue
            rows, cols = m.components.get(b, 0), m.components.get(a, 0)
            if not _mat_shape_ok(mat, rows, cols):
                out.append(f"action x{i} at weight {a} has wrong shape (expected {rows}x{cols})")
    if out:
        return out
    for i in range(m.n):
        for j in range(i + 1, m.n):
            wi, wj = m.var_weights[i], m.var_weights[j]
            for a in range(lo, hi - wi - wj + 1):
                if not m.components.get(a):
                    continue
                ji = matmul(m.action(j, a + wi), m.action(i, a), m.dim(a + wi), m.dim(a))
                ij = matmul(m.action(i, a + wj), m.action(j, a), m.dim(a + wj), m.dim(a))
                if ji != ij:
                    out.append(f"x{i} and x{j} do not commute at weight {a}")
    return out


def check_valid(m: TruncatedGradedModule) -> None:
    problems = validate_module(m)
    if problems:
        raise ModuleFormatError("; ".join(problems))


# -- fixed locus -----------------------------------------------------------

@dataclass(frozen=True)
class WeightComponent:
    weight: int
    dim: int
    projection: Matrix  # dim x total_dim, selects the weight block


def _basis_offsets(m: TruncatedGradedModule) -> dict[int, int]:
    offsets, pos = {}, 0
    for a, d in m.components.items():
        offsets[a] = pos
        pos += d
    return offsets


def weight_component(m: TruncatedGradedModule, i: int) -> WeightComponent:
    """Weight-``i`` summand of a module on the fixed locus (no variables)."""
    if m.n != 0:
        raise ValueError("weight components are submodules only on the fixed locus (n = 0)")
    total = m.total_dim()
    d = m.components.get(i, 0)
    proj = zeros(d, total)
    off = _basis_offsets(m).get(i, 0)
    for r in range(d):
        proj[r][off + r] = Fraction(1)
    return WeightComponent(i, d, proj)


@dataclass(frozen=True)
class FixedLocusMap:
    """Weight-preserving map between modules with no variables."""

    source: TruncatedGradedModule
    target: TruncatedGradedModule
    blocks: Mapping[int, tuple]  # weight -> matrix target_a x source_a

    def block(self, a: int) -> Matrix:
        mat = self.blocks.get(a)
        rows, cols = self.target.components.get(a, 0), self.source.components.get(a, 0)
        if mat is None:
            return zeros(rows, cols)
        return [list(r) for r in mat]

    def total_matrix(self) -> Matrix:
        so, to = _basis_offsets(self.source), _basis_offsets(self.target)
        big = zeros(self.target.total_dim(), self.source.total_dim())
        for a in set(self.source.components) & set(self.target.components):
            blk = self.block(a)
            for r, row in enumerate(blk):
                for c, x in enumerate(row):
                    big[to[a] + r][so[a] + c] = x
        return big


def kernel_weight_dims(f: FixedLocusMap) -> dict[int, int]:
    """``dim (ker f) cap M_i`` from the total matrix of ``f``."""
    big = f.total_matrix()
    ncols = f.source.total_dim()
    out = {}
    for a in f.source.components:
        # kernel vectors supported on the weight-a block
        sel = [
            [Fraction(int(c == k)) for c in range(ncols)]
            for k in range(ncols)
            if k not in _block_range(f.source, a)
        ]
        out[a] = ncols - rank(big + sel, ncols)
    return out


def cokernel_weight_dims(f: FixedLocusMap) -> dict[int, int]:
    """``dim N_i / (im f cap N_i)`` from the total matrix of ``f``."""
    big = f.total_matrix()
    nrows = f.target.total_dim()
    image = [list(col) for col in zip(*big)] if big and big[0] else []
    r_im = rank(image, nrows) if image else 0
    out = {}
    for a, d in f.target.components.items():
        block = [
            [Fraction(int(c == k)) for c in range(nrows)] for k in _block_range(f.target, a)
        ]
        r_sum = rank(image + block, nrows)
        meet = r_im + d - r_sum
        out[a] = d - meet
    return out


def _block_range(m: TruncatedGradedModule, a: int) -> range:
    off = _basis_offsets(m).get(a, 0)
    return range(off, off + m.components.get(a, 0))


# -- truncation and restriction -------------------------------------------

def truncate_ge(m: TruncatedGradedModule, a: int) -> TruncatedGradedModule:
    """``M_{>= a}``: drop components of weight below ``a``."""
    lo = max(m.a_min, a)
    comps = {w: d for w, d in m.components.items() if w >= lo}
    acts = {i: {w: mat for w, mat in per.items() if w >= lo} for i, per in m.actions.items()}
    # M_{>=a} vanishes below a even when M itself is not known there
    bounded = m.bounded_below or a > m.a_min
    return TruncatedGradedModule(m.var_weights, (lo, m.a_max), comps, acts, bounded)


def forget_lower_bound(m: TruncatedGradedModule) -> TruncatedGradedModule:
    """The same data with nothing assumed below ``a_min``."""
    return TruncatedGradedModule(m.var_weights, m.window, m.components, m.actions, False)


def safe_window(m: TruncatedGradedModule) -> tuple[int, int]:
    if m.bounded_below:
        return (m.a_min, m.a_max)
    return (m.a_min + sum(m.var_weights), m.a_max)


def restrict_to_fixed(m: TruncatedGradedModule) -> dict[int, int | None]:
    """Dimension of ``coker(sum_i M_{w - w_i} -> M_w)`` per window weight.

    ``None`` marks weights whose sources are not known.
    """
    out: dict[int, int | None] = {}
    for w in range(m.a_min, m.a_max + 1):
        srcs = [w - wi for wi in m.var_weights]
        if not all(m.known(s) for s in srcs):
            out[w] = None
            continue
        cols = [row for i, s in enumerate(srcs) for row in _transpose(m.action(i, s), m.dim(w))]
        out[w] = m.dim(w) - (rank(cols, m.dim(w)) if cols else 0)
    return out


def _transpose(mat: Matrix, nrows: int) -> Matrix:
    if not mat:
        return []
    return [list(col) for col in zip(*mat)] if mat[0] else []


# -- Koszul complex ---------------------------------------------------------

@dataclass(frozen=True)
class TorTable:
    safe_window: tuple[int, int]
    n: int
    entries: Mapping[tuple[int, int], int]  # nonzero (p, w) -> dim

    def get(self, p: int, w: int) -> int | None:
        lo, hi = self.safe_window
        if not lo <= w <= hi:
            return None
        return self.entries.get((p, w), 0)

    def weights(self) -> set[int]:
        return {w for (_, w), d in self.entries.items() if d}

    def by_degree(self, p: int) -> dict[int, int]:
        return {w: d for (q, w), d in sorted(self.entries.items()) if q == p}

    def to_json(self) -> dict:
        return {
            "safe_window": list(self.safe_window),
            "tor": {
                str(p): {str(w): d for w, d in self.by_degree(p).items()}
                for p in range(self.n + 1)
            },
        }


def _subsets(n: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), p))


def _koszul_blocks(m: TruncatedGradedModule, p: int, w: int) -> list[tuple[tuple[int, ...], int, int]]:
    """Summands ``(T, source weight, dim)`` of ``K_p`` in weight ``w``."""
    out = []
    for t in _subsets(m.n, p):
        a = w - sum(m.var_weights[k] for k in t)
        out.append((t, a, m.dim(a)))
    return out


def koszul_differential(m: TruncatedGradedModule, p: int, w: int) -> tuple[Matrix, int, int]:
    """``d_p : K_p -> K_{p-1}`` in weight ``w``; returns (matrix, rows, cols).

    ``e_T (x) v  |->  sum_k (-1)^k e_{T - t_k} (x) x_{t_k} v``.
    """
    src = _koszul_blocks(m, p, w)
    dst = _koszul_blocks(m, p - 1, w) if p >= 1 else []
    cols = sum(d for _, _, d in src)
    rows = sum(d for _, _, d in dst)
    mat = zeros(rows, cols)
    if p == 0 or rows == 0 or cols == 0:
        return mat, rows, cols
    row_off, pos = {}, 0
    for t, _, d in dst:
        row_off[t] = pos
        pos += d
    col = 0
    for t, a, d in src:
        if d:
            for k, var in enumerate(t):
                rest = t[:k] + t[k + 1:]
                blk = m.action(var, a)
                sign = -1 if k % 2 else 1
                r0 = row_off[rest]
                for r, row in enumerate(blk):
                    for c, x in enumerate(row):
                        if x:
                            mat[r0 + r][col + c] += sign * x
        col += d
    return mat, rows, cols


def koszul_tor(m: TruncatedGradedModule) -> TorTable:
    """Graded dimensions of ``Tor_p(M, k)`` on the certified weight range."""
    lo, hi = safe_window(m)
    entries = {}
    for w in range(lo, hi + 1):
        ranks = {}
        dims = {}
        for p in range(m.n + 2):
            if p <= m.n:
                mat, rows, cols = koszul_differential(m, p, w)
                dims[p] = cols
                ranks[p] = rank(mat, cols) if rows and cols else 0
            else:
                ranks[p] = 0
        for p in range(m.n + 1):
            h = dims[p] - ranks[p] - ranks[p + 1]
            if h:
                entries[(p, w)] = h
    return TorTable((lo, hi), m.n, entries)


def koszul_euler_rhs(m: TruncatedGradedModule, w: int) -> int:
    """``sum_T (-1)^|T| dim M_{w - w_T}``."""
    total = 0
    for p in range(m.n + 1):
        for t in _subsets(m.n, p):
            total += (-1) ** p * m.dim(w - sum(m.var_weights[k] for k in t))
    return total


def weights_concentrated_in(m: TruncatedGradedModule, interval: tuple[int, int]):
    """``True``/``False``, or ``UNKNOWN`` (``None``) when it cannot be decided.

    ``True`` certifies the Tor weights up to the horizon ``a_max``.  When the
    module is not bounded below, weights under the certified range that fall
    outside ``interval`` make the answer ``UNKNOWN`` unless a violation is
    already visible.
    """
    lo, hi = interval
    table = koszul_tor(m)
    if any(not lo <= w <= hi for w in table.weights()):
        return False
    if not m.bounded_below:
        slo = table.safe_window[0]
        hidden = [w for w in range(m.a_min, min(slo, m.a_max + 1)) if not lo <= w <= hi]
        if hidden:
            return UNKNOWN
    return True


# -- JSON -------------------------------------------------------------------

def module_to_json(m: TruncatedGradedModule) -> dict:
    return {
        "var_weights": list(m.var_weights),
        "window": list(m.window),
        "components": {str(a): d for a, d in m.components.items()},
        "actions": {
            str(i): {str(a): [[str(x) for x in row] for row in mat] for a, mat in per.items()}
            for i, per in m.actions.items()
        },
        "bounded_below": m.bounded_below,
    }


def _int(x, path: str) -> int:
    """Integers, or decimal strings (JSON object keys are always strings)."""
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ModuleFormatError(f"expected an integer, got {x!r}", path)


def module_from_json(data) -> TruncatedGradedModule:
    if not isinstance(data, dict):
        raise ModuleFormatError("top level must be an object", "$")
    for key in ("var_weights", "window", "components"):
        if key not in data:
            raise ModuleFormatError(f"missing key {key!r}", "$")
    vw = data["var_weights"]
    if not isinstance(vw, list):
        raise ModuleFormatError("must be a list", "$.var_weights")
    vw = [_int(x, f"$.var_weights[{k}]") for k, x in enumerate(vw)]
    win = data["window"]
    if not (isinstance(win, list) and len(win) == 2):
        raise ModuleFormatError("must be [lo, hi]", "$.window")
    win = (_int(win[0], "$.window[0]"), _int(win[1], "$.window[1]"))
    comps_raw = data["components"]
    if not isinstance(comps_raw, dict):
        raise ModuleFormatError("must be an object", "$.components")
    comps = {
        _int(k, f"$.components[{k!r}]"): _int(v, f"$.components[{k!r}]")
        for k, v in comps_raw.items()
    }
    acts: dict[int, dict[int, Matrix]] = {}
    for i, per in (data.get("actions") or {}).items():
        ii = _int(i, f"$.actions[{i!r}]")
        if not isinstance(per, dict):
            raise ModuleFormatError("must be an object", f"$.actions[{i!r}]")
        for a, mat in per.items():
            path = f"$.actions[{i!r}][{a!r}]"
            aa = _int(a, path)
            if not isinstance(mat, list) or not all(isinstance(r, list) for r in mat):
                raise ModuleFormatError("matrix must be a list of rows", path)
            try:
                acts.setdefault(ii, {})[aa] = [[Fraction(x) for x in row] for row in mat]
            except (ValueError, TypeError, ZeroDivisionError) as e:
                raise ModuleFormatError(f"bad matrix entry: {e}", path) from None
    m = TruncatedGradedModule(tuple(vw), win, comps, acts, bool(data.get("bounded_below", True)))
    problems = validate_module(m)
    if problems:
        raise ModuleFormatError("; ".join(problems), "$")
    return m


def load_module(path: str) -> TruncatedGradedModule:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModuleFormatError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None
    return module_from_json(data)


def free_module(var_weights: Sequence[int], window: tuple[int, int], gen: int = 0) -> TruncatedGradedModule:
    """``k[x](-gen)`` truncated to ``window`` (monomial basis, lex order)."""
    from .presentations import module_from_presentation

    return module_from_presentation(var_weights, [gen], [], window)
