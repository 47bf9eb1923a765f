"""Local derivations: a symbolically certified superspace and pointwise witnesses.

For symbolic x, let M(x) be the matrix whose columns are D_b(x) over a basis
of Der.  A local derivation Delta satisfies Delta(x) in col(M(x)) at every x,
so on the dense locus where M(x) has its generic rank r every (r+1)-minor of
[M(x) | Delta(x)] vanishes, hence vanishes identically as a polynomial.  The
linear conditions this imposes on the matrix of Delta cut out a subspace S
with Der <= LocDer <= S.

The generic minors say nothing about strata where M(x) loses rank, so S is
then intersected with the exact linear conditions Delta(p) in Der(L) p at a
fixed list of points p.  Each condition is necessary for a local
derivation, so the refined space is still a certified superspace; when it
equals Der the instance is proved.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Algebra, LinearMap, is_derivation
from .catalog import SimpleDecomposition
from .derivations import DerivationBasis, compute_der
from .linalg import RatMatrix, Subspace, nullspace, vadd, vsub
from .poly import MultiPoly, PolyMatrix, generic_rank, minor_constraints

MAX_SYMBOLIC_DIM = 10
DEFAULT_SEED = 0xC0FFEE


class CapabilityError(RuntimeError):
    """Raised when a symbolic certificate would exceed the supported dimension."""


@dataclass(frozen=True)
class LocalCertificate:
    algebra: Algebra
    superspace: Subspace
    der_space: Subspace
    verdict: str
    generic_rank: int
    witness_log: tuple = ()
    generic_dim: int | None = None
    points_used: int = 0

    @property
    def dims(self) -> dict:
        return {"der": self.der_space.dim, "superspace": self.superspace.dim,
                "generic_superspace": self.generic_dim, "generic_rank": self.generic_rank,
                "refinement_points": self.points_used}


@dataclass(frozen=True)
class WitnessSelector:
    """Chooses a derivation D_x with D_x(x) = Delta(x).

    ``degenerate`` is the linear functional whose zero set is the special
    stratum of the case split; samples on it are generated explicitly.
    """

    name: str
    degenerate: tuple
    choose: Callable = field(compare=False)

    def __call__(self, x: Sequence) -> LinearMap:
        return self.choose(x)


# symbolic superspace -------------------------------------------------------

def evaluation_matrix(der: DerivationBasis) -> PolyMatrix:
    """M(x): column b is D_b(x) for symbolic x = sum x_j e_j."""
    n = der.algebra.dim
    cols = []
    for flat in der.space.basis:
        cols.append([MultiPoly.linear(flat[i * n:(i + 1) * n]) for i in range(n)])
    rows = [[cols[b][i] for b in range(len(cols))] for i in range(n)]
    return PolyMatrix(rows, n, ncols=len(cols))


def generic_superspace(A: Algebra, der: DerivationBasis | None = None) -> tuple:
    """Return ``(S, r)`` from the identically vanishing (r+1)-minors of [M(x) | Delta(x)]."""
    if A.dim > MAX_SYMBOLIC_DIM:
        raise CapabilityError(f"symbolic certificates are limited to dimension {MAX_SYMBOLIC_DIM}; got {A.dim}")
    der = der or compute_der(A)
    n = A.dim
    M = evaluation_matrix(der)
    r = generic_rank(M)
    xs = [MultiPoly.var(j, n) for j in range(n)]
    # Delta(x)_i = sum_j u_{i*n+j} x_j
    extra = [{i * n + j: xs[j] for j in range(n)} for i in range(n)]
    system = minor_constraints(M, extra, r, n * n)
    S = nullspace(system) if system.nrows else Subspace.full(n * n)
    return S, r


def point_constraints(der: DerivationBasis, p: Sequence) -> list:
    """Linear equations on Delta expressing Delta(p) in Der(L) p."""
    n = der.algebra.dim
    rows = []
    for phi in orbit_space(der, p).annihilator().basis:
        row = [Fraction(0)] * (n * n)
        for i in range(n):
            if phi[i]:
                for j in range(n):
                    if p[j]:
                        row[i * n + j] += phi[i] * p[j]
        if any(row):
            rows.append(row)
    return rows


GRID_LIMIT = 7


def refinement_points(n: int, extra: Sequence = ()) -> list:
    """Fixed point order for the stratum refinement: special points, then the {-1,0,1} grid."""
    pts = [tuple(Fraction(c) for c in p) for p in extra]
    pts.append(tuple(Fraction(1) for _ in range(n)))
    for i in range(n):
        pts.append(tuple(Fraction(int(i == j)) for j in range(n)))
    if n <= GRID_LIMIT:
        pts.extend(tuple(Fraction(c) for c in p) for p in itertools.product((-1, 0, 1), repeat=n) if any(p))
    seen = set()
    return [p for p in pts if not (p in seen or seen.add(p))]


def refine_superspace(der: DerivationBasis, S: Subspace, points: Sequence, batch: int = 32) -> tuple:
    """Intersect S with the exact conditions Delta(p) in Der(L) p; stops once S = Der.

    Returns ``(S', points used)``.  Every step keeps LocDer inside S'.
    """
    n2 = S.ambient_dim
    used = 0
    for start in range(0, len(points), batch):
        if S == der.space:
            break
        rows = []
        for p in points[start:start + batch]:
            rows.extend(point_constraints(der, p))
        used = min(len(points), start + batch)
        if rows:
            S = S & nullspace(RatMatrix(rows, ncols=n2))
    return S, used


def locder_superspace(A: Algebra, der: DerivationBasis | None = None, refine: bool = True,
                      extra_points: Sequence = ()) -> tuple:
    """Certified superspace of LocDer: returns ``(S, r)``.

    S starts from the generic minor identities and, when ``refine`` is set, is
    cut further by exact membership conditions at the fixed refinement points
    (these catch maps that only fail on rank-dropping strata).
    """
    der = der or compute_der(A)
    S, r = generic_superspace(A, der)
    if refine:
        S, _ = refine_superspace(der, S, refinement_points(A.dim, extra_points))
    return S, r


def local_certificate(A: Algebra, der: DerivationBasis | None = None, extra_points: Sequence = ()) -> LocalCertificate:
    """Superspace certificate; verdict ``equal`` proves every local derivation is a derivation."""
    der = der or compute_der(A)
    S0, r = generic_superspace(A, der)
    S, used = refine_superspace(der, S0, refinement_points(A.dim, extra_points))
    verdict = "equal" if S == der.space else "inconclusive"
    return LocalCertificate(A, S, der.space, verdict, r, generic_dim=S0.dim, points_used=used)


def simple_local_certificate(dec: SimpleDecomposition) -> LocalCertificate:
    return local_certificate(dec.algebra, compute_der(dec.algebra, dec), [vadd(dec.h0, dec.i0)])


def strict_certificate(A: Algebra, delta: LinearMap, selector: WitnessSelector,
                       samples: Sequence, der: DerivationBasis | None = None) -> LocalCertificate:
    """Superspace certificate upgraded to ``strictly_larger`` by a witnessed non-derivation in S."""
    der = der or compute_der(A)
    base = local_certificate(A, der)
    S = base.superspace
    ok, log = certify_local(A, delta, samples, selector, der)
    if S == der.space:
        verdict = "equal"
    elif ok and S.contains(delta.flat()) and not der.space.contains(delta.flat()):
        verdict = "strictly_larger"
    else:
        verdict = "inconclusive"
    return LocalCertificate(A, S, der.space, verdict, base.generic_rank, tuple(log),
                            generic_dim=base.generic_dim, points_used=base.points_used)


# pointwise certification -----------------------------------------------------

def orbit_space(der: DerivationBasis, x: Sequence) -> Subspace:
    """Der(L) x."""
    return Subspace.span([D(x) for D in der.maps], der.algebra.dim)


def certify_local(A: Algebra, delta: LinearMap, samples: Sequence, selector: WitnessSelector | None = None,
                  der: DerivationBasis | None = None) -> tuple:
    """Check Delta(x) in Der(L) x at every sample, and the selected witness when given.

    Returns ``(ok, log)``; log entries are dicts ordered by sample index.
    """
    der = der or compute_der(A)
    maps = der.maps
    checked: dict = {}
    log = []
    ok = True
    for idx, x in enumerate(samples):
        x = tuple(Fraction(c) for c in x)
        target = delta(x)
        member = Subspace.span([D(x) for D in maps], A.dim).contains(target)
        entry = {"index": idx, "point": x, "member": member}
        if selector is not None:
            W = selector(x)
            key = W.flat()
            if key not in checked:
                checked[key] = is_derivation(A, W)
            entry["witness"] = key
            entry["witness_is_derivation"] = checked[key]
            entry["witness_matches"] = W(x) == target
            good = member and checked[key] and entry["witness_matches"]
        else:
            good = member
        entry["ok"] = good
        ok = ok and good
        log.append(entry)
    return ok, log


# the filiform operators ----------------------------------------------------

_FAMILY_SUPPORT = {"F1": (0, 1), "F2": (0,), "F3": (1,)}


def _family(family: str) -> str:
    fam = family.upper()
    if fam not in _FAMILY_SUPPORT:
        raise ValueError(f"unknown filiform family {family!r}")
    return fam


def filiform_selector_functional(family: str, n: int) -> tuple:
    """Linear functional s(x) with s = x1 + x2 (F1), x1 (F2), x2 (F3)."""
    fam = _family(family)
    return tuple(1 if i in _FAMILY_SUPPORT[fam] else 0 for i in range(n))


def filiform_operator(A: Algebra, family: str, alpha, beta) -> LinearMap:
    """x -> alpha * s(x) e_{n-1} + beta * x3 e_n, with s the family functional."""
    n = A.dim
    if n < 3:
        raise ValueError("filiform operators need n >= 3")
    s = filiform_selector_functional(family, n)
    cols = []
    for j in range(n):
        col = [Fraction(0)] * n
        col[n - 2] += Fraction(alpha) * s[j]
        if j == 2:
            col[n - 1] += Fraction(beta)
        cols.append(col)
    return LinearMap(A, RatMatrix.from_columns(cols))


def filiform_top_derivation(A: Algebra, family: str) -> LinearMap:
    """x -> s(x) e_n; kills L^2 and lands in the centre."""
    n = A.dim
    s = filiform_selector_functional(family, n)
    cols = [[Fraction(0)] * (n - 1) + [Fraction(s[j])] for j in range(n)]
    return LinearMap(A, RatMatrix.from_columns(cols))


def build_filiform_local_nonderivation(A: Algebra, family: str) -> LinearMap:
    """The operator with alpha = 1, beta = 0; a local derivation that is not a derivation."""
    delta = filiform_operator(A, family, 1, 0)
    # within the family the operator is a derivation exactly when alpha = beta
    if is_derivation(A, delta) or not is_derivation(A, filiform_operator(A, family, 1, 1)):
        raise ValueError(f"{A.name or 'algebra'} does not match family {family}")
    return delta


def filiform_witness_selector(A: Algebra, family: str) -> WitnessSelector:
    """D2 on s(x) = 0, otherwise D1 + t D2 with t = -x3 / s(x)."""
    fam = _family(family)
    s = filiform_selector_functional(fam, A.dim)
    D1 = filiform_operator(A, fam, 1, 1)
    D2 = filiform_top_derivation(A, fam)

    def choose(x):
        sx = sum(a * b for a, b in zip(s, x))
        if sx == 0:
            return D2
        t = -Fraction(x[2]) / sx
        return D1 + t * D2

    return WitnessSelector(f"{fam}-split", s, choose)


# sample sets -----------------------------------------------------------------

def random_points(n: int, count: int, seed: int = DEFAULT_SEED, lo: int = -9, hi: int = 9) -> list:
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(lo, hi)) for _ in range(n)) for _ in range(count)]


def hyperplane_points(functional: Sequence, count: int, seed: int = DEFAULT_SEED) -> list:
    """Seeded points on {s(x) = 0}, plus the basis of that hyperplane."""
    n = len(functional)
    pivot = next((i for i, c in enumerate(functional) if c), None)
    if pivot is None:
        return []
    basis = nullspace(RatMatrix([list(functional)], ncols=n)).basis
    out = [tuple(b) for b in basis]
    for p in random_points(n, count, seed + 1):
        p = list(p)
        rest = sum(Fraction(c) * p[i] for i, c in enumerate(functional) if i != pivot)
        p[pivot] = -rest / functional[pivot]
        out.append(tuple(p))
    return out


def structured_samples(n: int, seed: int = DEFAULT_SEED, degenerate: Sequence | None = None,
                       extra: Sequence = (), random_count: int = 50) -> list:
    """Basis vectors, pairwise sums/differences, extra points, the degenerate stratum, and seeded random points."""
    e = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    pts = list(e)
    for a, b in itertools.combinations(e, 2):
        pts.append(vadd(a, b))
        pts.append(vsub(a, b))
    pts.extend(tuple(Fraction(c) for c in p) for p in extra)
    if degenerate is not None:
        pts.extend(hyperplane_points(degenerate, 20, seed))
    pts.extend(random_points(n, random_count, seed))
    seen = set()
    out = []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out
