"""Real-interference-alignment machinery.

Monomial exponent sets over channel gains, the block-diagonal precoder,
structure maps describing how observations collapse onto shared product
monomials, PAM parameter selection, constellation enumeration with exact
collision witnesses, and nearest-point decoding.

Monomial identity is always the integer exponent tuple, never the floating
value: nearby gains produce spuriously equal floats, while the alignment
argument is combinatorial (an observation entry equals gain * monomial, and
two entries align exactly when their exponent tuples match).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    AmbiguousConstellation,
    InvalidEpsilon,
    SizeOverflow,
)

#: Default cap on monomial-set members.
MEMBER_CAP = 10**6
#: Default cap on enumerated constellation points.
POINT_CAP = 10**7

GENERATOR = "generator"
PRODUCT = "product"


@dataclass(frozen=True)
class MonomialExponent:
    """Exponent tuple of one monomial over a (states x antennas) gain grid.

    ``exponents`` is flattened row-major: entry ``k * M + i`` is the exponent
    of gain (state k, antenna i).  Equality is exact tuple equality.
    """

    exponents: tuple
    shape: tuple

    def __post_init__(self):
        ns, na = self.shape
        if ns * na != len(self.exponents):
            raise ValueError("exponent tuple does not match shape")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be non-negative")

    def __getitem__(self, key) -> int:
        k, i = key
        return self.exponents[k * self.shape[1] + i]

    def value(self, base_gains) -> float:
        flat = np.asarray(base_gains, dtype=np.float64).reshape(-1)
        return float(np.prod(flat ** np.asarray(self.exponents)))


@dataclass(frozen=True, eq=False)
class MonomialSet:
    """All exponent tuples over ``base_gains`` with a bounded range.

    role "generator": exponents in {0..N-1}, N^num_bases members.
    role "product":   exponents in {0..N},   (N+1)^num_bases members.
    Members are stored in lexicographic order (first base most significant).
    """

    N: int
    base_gains: np.ndarray
    role: str
    exponent_table: np.ndarray

    @property
    def shape(self) -> tuple:
        return self.base_gains.shape

    @property
    def num_bases(self) -> int:
        return self.base_gains.size

    @property
    def width(self) -> int:
        """Per-exponent alphabet size (N for generator, N+1 for product)."""
        return self.N if self.role == GENERATOR else self.N + 1

    def __len__(self) -> int:
        return self.exponent_table.shape[0]

    def values(self) -> np.ndarray:
        """Numeric monomial values, in member order."""
        flat = self.base_gains.reshape(-1)
        return np.prod(flat[None, :] ** self.exponent_table, axis=1)

    def sum_squares(self) -> float:
        return float(np.sum(self.values() ** 2))

    def member(self, index: int) -> MonomialExponent:
        return MonomialExponent(
            tuple(int(e) for e in self.exponent_table[index]), self.shape
        )

    def index_of(self, exponents) -> int:
        """Mixed-radix index of an exponent tuple (must be in range)."""
        idx = 0
        for e in exponents:
            if not 0 <= e < self.width:
                raise ValueError(f"exponent {e} outside range 0..{self.width - 1}")
            idx = idx * self.width + int(e)
        return idx

    def dump_text(self) -> str:
        """One exponent tuple per line, space-separated, member order."""
        return "\n".join(
            " ".join(str(int(e)) for e in row) for row in self.exponent_table
        )


def build_monomial_set(
    base_gains, N: int, role: str, cap: int = MEMBER_CAP
) -> MonomialSet:
    """Enumerate the monomial set over the given gains.

    Raises SizeOverflow when width^num_bases exceeds ``cap``.
    """
    if role not in (GENERATOR, PRODUCT):
        raise ValueError(f"unknown role {role!r}")
    if N < 1:
        raise ValueError("N must be >= 1")
    gains = np.atleast_2d(np.asarray(base_gains, dtype=np.float64))
    nb = gains.size
    if nb == 0:
        raise ValueError("base_gains must be nonempty")
    width = N if role == GENERATOR else N + 1
    size = width**nb
    if size > cap:
        raise SizeOverflow(f"{width}^{nb} = {size} members exceeds cap {cap}")
    idx = np.arange(size, dtype=np.int64)
    table = np.empty((size, nb), dtype=np.int64)
    for pos in range(nb):
        table[:, pos] = (idx // width ** (nb - 1 - pos)) % width
    gains = gains.copy()
    gains.flags.writeable = False
    table.flags.writeable = False
    return MonomialSet(N=N, base_gains=gains, role=role, exponent_table=table)


@dataclass(frozen=True, eq=False)
class AlignmentPrecoder:
    """Block-diagonal M x (M*L) precoder carrying the monomial vector v.

    Column c is nonzero only in row c // L and carries monomial c % L, so
    antenna blocks are contiguous column ranges of width L.
    """

    M: int
    mset: MonomialSet
    v: np.ndarray

    @property
    def L(self) -> int:
        return len(self.mset)

    @property
    def cols(self) -> int:
        return self.M * self.L

    def layout(self, col: int) -> tuple:
        """(antenna, monomial index) carried by a column."""
        return col // self.L, col % self.L

    def matrix(self) -> np.ndarray:
        V = np.zeros((self.M, self.cols))
        for i in range(self.M):
            V[i, i * self.L : (i + 1) * self.L] = self.v
        return V


def build_precoder(mset: MonomialSet, M: int) -> AlignmentPrecoder:
    if mset.role != GENERATOR:
        raise ValueError("precoder requires a generator monomial set")
    if M < 1:
        raise ValueError("M must be >= 1")
    return AlignmentPrecoder(M=M, mset=mset, v=mset.values())


@dataclass(frozen=True, eq=False)
class StructureMap:
    """0/1 map from precoder columns onto product-monomial rows.

    ``ones[r]`` lists the columns collapsing onto row r.  Maps built by
    :func:`effective_channels` partition the columns with row weight <= M;
    the constructor deliberately does not enforce the partition so that the
    entropy oracles can also evaluate overlapping maps.
    """

    rows: int
    cols: int
    ones: tuple

    def __post_init__(self):
        if len(self.ones) != self.rows:
            raise ValueError("ones must list every row")
        norm = []
        for row in self.ones:
            row = tuple(int(c) for c in row)
            if len(set(row)) != len(row):
                raise ValueError("duplicate column inside one row")
            if row and not (0 <= min(row) and max(row) < self.cols):
                raise ValueError("column index out of range")
            norm.append(tuple(sorted(row)))
        object.__setattr__(self, "ones", tuple(norm))

    def row_weights(self) -> np.ndarray:
        return np.array([len(r) for r in self.ones], dtype=np.int64)

    def max_row_weight(self) -> int:
        return int(self.row_weights().max(initial=0))

    def is_partition(self) -> bool:
        seen = [c for row in self.ones for c in row]
        return len(seen) == self.cols and len(set(seen)) == self.cols

    def matrix(self) -> np.ndarray:
        S = np.zeros((self.rows, self.cols), dtype=np.int64)
        for r, row in enumerate(self.ones):
            S[r, list(row)] = 1
        return S

    def apply(self, b) -> np.ndarray:
        """Row sums S @ b without materializing the matrix."""
        b = np.asarray(b)
        return np.array([b[list(row)].sum() if row else b.dtype.type(0)
                         for row in self.ones])

    def dump_text(self) -> str:
        """One row-membership list per line (empty line for an empty row)."""
        return "\n".join(" ".join(str(c) for c in row) for row in self.ones)


def effective_channels(precoder: AlignmentPrecoder, channel, cap: int = MEMBER_CAP):
    """Effective channels after precoding, split into direct and aligned parts.

    The precoder must have been built over one group's gains (the "aligned"
    group).  For the other group the effective vector is plain numerics; for
    each aligned state k the effective vector collapses exactly onto product
    monomials: entry (antenna i, monomial m) has exponent tuple
    exponents(m) + 1 at position (k, i), always inside the product range.

    Returns
    -------
    (ht, smaps, gbar)
        ht: (num_direct, M*L) numeric effective vectors h_j^T V.
        smaps: one StructureMap per aligned state.
        gbar: product-monomial value vector (the aligned effective vector of
        state k is exactly gbar^T S_k).
    """
    base = precoder.mset.base_gains
    if np.array_equal(base, channel.eaves_matrix):
        aligned = channel.eaves_matrix
        direct = channel.legit_matrix
    elif np.array_equal(base, channel.legit_matrix):
        aligned = channel.legit_matrix
        direct = channel.eaves_matrix
    else:
        raise ValueError("precoder was not built over this channel's gains")

    M, L = precoder.M, precoder.L
    if aligned.shape[1] != M:
        raise ValueError("precoder antenna count does not match channel")
    ht = direct @ precoder.matrix()

    product = build_monomial_set(base, precoder.mset.N, PRODUCT, cap=cap)
    gbar = product.values()
    width = product.width
    nb = product.num_bases
    # Mixed-radix weights of the product index, row-major over (state, antenna).
    radix = width ** np.arange(nb - 1, -1, -1, dtype=np.int64)
    gen_index = precoder.mset.exponent_table @ radix  # product index of each monomial

    smaps = []
    for k in range(aligned.shape[0]):
        bins: dict[int, list[int]] = {}
        for i in range(M):
            bump = radix[k * M + i]  # exponent +1 at position (k, i)
            for m in range(L):
                row = int(gen_index[m] + bump)
                bins.setdefault(row, []).append(i * L + m)
        ones = tuple(tuple(bins.get(r, ())) for r in range(len(product)))
        smaps.append(StructureMap(rows=len(product), cols=M * L, ones=ones))
    return ht, smaps, gbar


@dataclass(frozen=True)
class PamCode:
    """PAM constellation parameters: per-symbol alphabet a*{-Q..Q}.

    ``dims`` independent symbols; ``gamma`` is the scheme's power
    normalization, kept so the analytic power check can be rerun.
    """

    a: float
    Q: int
    dims: int
    gamma: float

    def __post_init__(self):
        if self.Q < 1 or self.a <= 0 or self.dims < 1:
            raise ValueError("need Q >= 1, a > 0, dims >= 1")

    @property
    def points_per_symbol(self) -> int:
        return 2 * self.Q + 1

    def log2_points(self) -> float:
        return math.log2(self.points_per_symbol)

    def symbol_values(self) -> np.ndarray:
        return self.a * np.arange(-self.Q, self.Q + 1, dtype=np.float64)

    def mean_square_symbol(self) -> float:
        """E[b^2] of one uniform symbol: a^2 Q(Q+1)/3."""
        return self.a**2 * self.Q * (self.Q + 1) / 3.0


def select_pam_params(
    P: float,
    dims_total: int,
    eps: float,
    gamma: float,
    power_split: float | None = None,
) -> PamCode:
    """Pick (Q, a) for accumulated interference dimension ``dims_total``.

    Q = max(1, floor(P^((1-eps)/(2(dims_total+eps))))) and
    a = gamma * sqrt(power_split) / Q, where ``power_split`` is the
    scheme-specific share of the power budget (defaults to P).  Flooring Q
    only tightens the power constraint.
    """
    if not (0 < eps < 1):
        raise InvalidEpsilon(f"eps must be in (0, 1), got {eps}")
    if not (P > 1):
        raise ValueError("P must exceed 1")
    if gamma <= 0 or dims_total < 1:
        raise ValueError("need gamma > 0 and dims_total >= 1")
    exponent = (1.0 - eps) / (2.0 * (dims_total + eps))
    Q = max(1, int(math.floor(P**exponent)))
    p_eff = P if power_split is None else float(power_split)
    a = gamma * math.sqrt(p_eff) / Q
    return PamCode(a=a, Q=Q, dims=dims_total, gamma=gamma)


@dataclass(frozen=True, eq=False)
class Constellation:
    """Receiver constellation {alpha^T b} with exact collision bookkeeping.

    ``points`` are the distinct values sorted ascending; ``representatives``
    holds, per point, the enumeration index of its lexicographically
    smallest generating b; ``collisions`` maps each colliding value to all
    generating b tuples.
    """

    alpha: np.ndarray
    pam: PamCode
    points: np.ndarray
    representatives: np.ndarray
    collisions: tuple

    @property
    def dims(self) -> int:
        return self.alpha.size

    @property
    def size_raw(self) -> int:
        return self.pam.points_per_symbol**self.dims

    @property
    def collision_count(self) -> int:
        """Number of enumerated tuples absorbed into an earlier value."""
        return self.size_raw - self.points.size

    def b_of_index(self, index: int) -> tuple:
        """Decode an enumeration index back to its b tuple in {-Q..Q}^dims."""
        width = self.pam.points_per_symbol
        digits = []
        for _ in range(self.dims):
            digits.append(index % width - self.pam.Q)
            index //= width
        return tuple(reversed(digits))


def enumerate_receiver_constellation(
    alpha, pam: PamCode, cap: int = POINT_CAP
) -> Constellation:
    """All distinct values alpha^T b over b in (a*{-Q..Q})^dims.

    Collisions (two b with exactly equal value) are witnessed with their
    generating tuples; for rationally independent alpha there are none.
    """
    alpha = np.ascontiguousarray(alpha, dtype=np.float64)
    total = pam.points_per_symbol ** alpha.size
    if total > cap:
        raise SizeOverflow(f"{total} constellation points exceed cap {cap}")
    vals = _kernels.cartesian_sums(pam.a * alpha, pam.Q)
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    # Run starts: first occurrence of each distinct value; stable sort keeps
    # enumeration (lexicographic) order inside runs of equal values.
    new_run = np.empty(total, dtype=bool)
    new_run[0] = True
    np.not_equal(sorted_vals[1:], sorted_vals[:-1], out=new_run[1:])
    starts = np.flatnonzero(new_run)
    points = sorted_vals[starts]
    representatives = np.minimum.reduceat(order, starts)
    collisions = []
    run_lengths = np.diff(np.append(starts, total))
    for s, ln in zip(starts[run_lengths > 1], run_lengths[run_lengths > 1]):
        members = np.sort(order[s : s + ln])
        collisions.append((float(sorted_vals[s]), tuple(int(i) for i in members)))
    points = points.copy()
    points.flags.writeable = False
    return Constellation(
        alpha=alpha,
        pam=pam,
        points=points,
        representatives=representatives,
        collisions=tuple(collisions),
    )


def min_distance(constellation: Constellation) -> float:
    """Exact minimum spacing over the distinct constellation values.

    Exact duplicates were collapsed at enumeration; use
    ``constellation.collision_count`` to distinguish rational dependence
    from genuine spacing.
    """
    pts = constellation.points
    if pts.size < 2:
        raise ValueError("constellation needs at least 2 distinct points")
    return float(np.min(np.diff(pts)))


def decode_nearest(y: float, alpha, pam: PamCode, constellation=None) -> tuple:
    """Maximum-likelihood (nearest-point) decoding of a scalar observation.

    Ties are broken toward the lexicographically smallest b.  Raises
    AmbiguousConstellation if any two distinct b share a point.
    """
    if constellation is None:
        constellation = enumerate_receiver_constellation(alpha, pam)
    if constellation.collisions:
        raise AmbiguousConstellation(
            f"{len(constellation.collisions)} colliding values; "
            "decoding is not unique"
        )
    pts = constellation.points
    pos = int(np.searchsorted(pts, y))
    candidates = [i for i in (pos - 1, pos) if 0 <= i < pts.size]
    best = None
    best_dist = math.inf
    for i in candidates:
        d = abs(float(pts[i]) - float(y))
        if d < best_dist:
            best, best_dist = i, d
        elif d == best_dist and best is not None:
            # Exact midpoint tie: prefer the lexicographically smaller b.
            a = constellation.b_of_index(int(constellation.representatives[i]))
            bcur = constellation.b_of_index(int(constellation.representatives[best]))
            if a < bcur:
                best = i
    return constellation.b_of_index(int(constellation.representatives[best]))


def check_rational_independence(alpha) -> bool | None:
    """Tri-state rational-independence check.

    Inputs carrying exponent metadata (MonomialExponent sequence or a
    MonomialSet) are certified by exact tuple distinctness: distinct
    monomials in continuously drawn gains are rationally independent almost
    surely.  Numeric-only inputs return None (unknown): certifying rational
    independence of arbitrary reals is out of scope.
    """
    if isinstance(alpha, MonomialSet):
        members = [tuple(row) for row in alpha.exponent_table]
        return len(set(members)) == len(members)
    try:
        items = list(alpha)
    except TypeError:
        return None
    if items and all(isinstance(m, MonomialExponent) for m in items):
        seen = {(m.shape, m.exponents) for m in items}
        return len(seen) == len(items)
    return None
