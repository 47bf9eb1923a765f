"""Constructors for the algebra families used throughout the library.

sl2 convention used by the constructors: the module basis x_0, ..., x_n
carries the right action

    [x_k, e] = x_{k+1},   [x_k, f] = -k(n+1-k) x_{k-1},   [x_k, h] = (n-2k) x_k,

so ``e`` raises the index.  Consistency with the right Leibniz identity then
forces [h, e] = 2e, [h, f] = -2f, [e, f] = -h.  The table printed for the
6-dimensional algebra with a 3-dimensional module uses the opposite labels
(``f`` raises); :func:`printed_sl2_v3` reproduces it verbatim and
:data:`PRINTED_RELABELING` converts between the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .algebra import (
    Algebra,
    LeibnizIdentityError,
    annihilator,
    bracket,
    check_leibniz,
    derived_algebra,
    is_left_module_trivial,
    is_subalgebra,
    nilindex,
    span_of,
    squares_ideal,
)
from .linalg import RatMatrix, Subspace, as_rational, vscale

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"


# nilpotent families ---------------------------------------------------------

def make_nf(n: int) -> Algebra:
    """Null-filiform algebra: [e_i, e_1] = e_{i+1} for i < n."""
    if n < 1:
        raise ValueError("NF_n needs n >= 1")
    products = {(i, 0): {i + 1: 1} for i in range(n - 1)}
    A = Algebra(n, products, name=f"nf{n}")
    return A


def make_abelian(n: int) -> Algebra:
    return Algebra(n, {}, name=f"abelian{n}")


@dataclass(frozen=True)
class FiliformParams:
    """Parameters of one of the three filiform families.

    ``parameters`` follow the family signature:

    * F1: (a_4, ..., a_n, theta)        -- n - 2 values
    * F2: (b_3, ..., b_n, gamma)        -- n - 1 values (b_3 enters no product)
    * F3: (theta_1, theta_2, theta_3)

    For F3, ``fillers`` maps a pair (i, j) with i < j (1-based) to
    {k: coeff} with k >= i + j + 1; the product [e_j, e_i] is set to the
    negative.  ``alpha`` is the 0/1 flag multiplying (-1)^i e_n in
    [e_i, e_{n-i}]; it must be 0 for even n.
    """

    family: str
    n: int
    parameters: tuple = ()
    fillers: Mapping = field(default_factory=dict)
    alpha: int = 0

    @classmethod
    def zero(cls, family: str, n: int) -> "FiliformParams":
        count = {"F1": n - 2, "F2": n - 1, "F3": 3}[family]
        return cls(family, n, (0,) * count)


def _add(products: dict, i: int, j: int, k: int, c) -> None:
    """Add c * e_k to [e_i, e_j]; 1-based indices."""
    c = as_rational(c)
    if c:
        slot = products.setdefault((i - 1, j - 1), {})
        slot[k - 1] = slot.get(k - 1, Fraction(0)) + c


def make_filiform(p: FiliformParams) -> Algebra:
    """Build the multiplication table of a filiform family member; rejects tables failing the Leibniz identity."""
    n, fam = p.n, p.family
    params = [as_rational(a) for a in p.parameters]
    prods: dict = {}
    if fam == "F1":
        if n < 4 or len(params) != n - 2:
            raise ValueError("F1 needs n >= 4 and parameters (a_4, ..., a_n, theta)")
        a = {k: params[k - 4] for k in range(4, n + 1)}
        theta = params[-1]
        _add(prods, 1, 1, 3, 1)
        for i in range(2, n):
            _add(prods, i, 1, i + 1, 1)
        for k in range(4, n):
            _add(prods, 1, 2, k, a[k])
        _add(prods, 1, 2, n, theta)
        for i in range(2, n - 1):
            for k in range(i + 2, n + 1):
                _add(prods, i, 2, k, a[k + 2 - i])
    elif fam == "F2":
        if n < 4 or len(params) != n - 1:
            raise ValueError("F2 needs n >= 4 and parameters (b_3, ..., b_n, gamma)")
        b = {k: params[k - 3] for k in range(3, n + 1)}
        gamma = params[-1]
        _add(prods, 1, 1, 3, 1)
        for i in range(3, n):
            _add(prods, i, 1, i + 1, 1)
        for k in range(4, n + 1):
            _add(prods, 1, 2, k, b[k])
        _add(prods, 2, 2, n, gamma)
        for i in range(3, n - 1):
            for k in range(i + 2, n + 1):
                _add(prods, i, 2, k, b[k + 2 - i])
    elif fam == "F3":
        if n < 3 or len(params) != 3:
            raise ValueError("F3 needs n >= 3 and parameters (theta_1, theta_2, theta_3)")
        if p.alpha not in (0, 1) or (p.alpha and n % 2 == 0):
            raise ValueError("F3 flag alpha must be 0 or 1, and 0 for even n")
        t1, t2, t3 = params
        for i in range(2, n):
            _add(prods, i, 1, i + 1, 1)
        for i in range(3, n):
            _add(prods, 1, i, i + 1, -1)
        _add(prods, 1, 1, n, t1)
        _add(prods, 1, 2, 3, -1)
        _add(prods, 1, 2, n, t2)
        _add(prods, 2, 2, n, t3)
        for (i, j), coeffs in sorted(p.fillers.items()):
            if not (1 <= i < j and j <= n - i and i <= n - 2):
                raise ValueError(f"F3 filler pair ({i}, {j}) outside the allowed range")
            for k, c in coeffs.items():
                if not (i + j + 1 <= k <= n):
                    raise ValueError(f"F3 filler [e{i}, e{j}] may only involve e_{i + j + 1}..e_{n}")
                _add(prods, i, j, k, c)
                _add(prods, j, i, k, -as_rational(c))
        # the i = n-1 end of the printed range would clash with [e_{n-1}, e_1] = e_n
        for i in range(2, n - 1):
            _add(prods, i, n - i, n, p.alpha * (-1) ** i)
    else:
        raise ValueError(f"unknown filiform family {fam!r}")
    name = f"{fam.lower()}_n{n}"
    try:
        return Algebra(n, prods, name=name, check=True)
    except LeibnizIdentityError as exc:
        raise LeibnizIdentityError(exc.triple, f"{fam} parameters {tuple(p.parameters)} violate the Leibniz identity "
                                   f"on basis triple {tuple(t + 1 for t in exc.triple)}") from None


# sl2 and its modules --------------------------------------------------------

SL2_NAMES = ("h", "e", "f")
H, E, F = 0, 1, 2


def _sl2_products() -> dict:
    return {
        (H, E): {E: 2}, (E, H): {E: -2},
        (H, F): {F: -2}, (F, H): {F: 2},
        (E, F): {H: -1}, (F, E): {H: 1},
    }


def make_sl2() -> Algebra:
    return Algebra(3, _sl2_products(), SL2_NAMES, name="sl2")


def make_sl2_module(m: int) -> dict:
    """Right action of sl2 on the m-dimensional irreducible module.

    Returns ``{(k, g): {k2: coeff}}`` meaning [x_k, g] = sum coeff * x_k2,
    with g in {H, E, F}.
    """
    if m < 1:
        raise ValueError("module dimension must be >= 1")
    n = m - 1
    action: dict = {}
    for k in range(m):
        if n - 2 * k:
            action[(k, H)] = {k: n - 2 * k}
        if k < n:
            action[(k, E)] = {k + 1: 1}
        if k >= 1:
            action[(k, F)] = {k - 1: -k * (n + 1 - k)}
    return action


@dataclass(frozen=True)
class SimpleDecomposition:
    """Split L = G + I of a simple Leibniz algebra with its distinguished data.

    ``theta`` is the (dim I x dim G) matrix of the G-module isomorphism
    G -> I in the bases given by ``g_indices`` / ``i_indices``; present only
    when the two have equal dimension.  ``roots`` and ``weights`` list
    (label, value on h0).
    """

    algebra: Algebra
    g_indices: tuple
    i_indices: tuple
    h0: tuple
    i0: tuple
    roots: tuple
    weights: tuple
    theta: RatMatrix | None = None
    sl2: Mapping = field(default_factory=dict)

    @property
    def dim_g(self) -> int:
        return len(self.g_indices)

    @property
    def dim_i(self) -> int:
        return len(self.i_indices)

    def g_part(self, v: Sequence) -> tuple:
        return tuple(v[i] if i in self.g_indices else Fraction(0) for i in range(self.algebra.dim))

    def i_part(self, v: Sequence) -> tuple:
        return tuple(v[i] if i in self.i_indices else Fraction(0) for i in range(self.algebra.dim))

    def theta_of(self, x: Sequence) -> tuple:
        """theta extended by zero on I."""
        if self.theta is None:
            raise ValueError("this decomposition has no module isomorphism G -> I")
        g = [x[i] for i in self.g_indices]
        img = self.theta.apply(g)
        out = [Fraction(0)] * self.algebra.dim
        for idx, c in zip(self.i_indices, img):
            out[idx] = c
        return tuple(out)

    def validate(self) -> None:
        """Assert the structural invariants; raises AssertionError with a reason."""
        A = self.algebra
        ok, triple = check_leibniz(A)
        assert ok, f"Leibniz identity fails at {triple}"
        G = span_of(A, self.g_indices)
        I = span_of(A, self.i_indices)
        assert is_subalgebra(A, G), "span of G indices is not a subalgebra"
        assert I == squares_ideal(A), "span of I indices differs from the squares ideal"
        assert is_left_module_trivial(A, I), "[L, I] != 0"
        vals = [v for _, v in self.roots]
        assert len(set(vals)) == len(vals) and all(vals), "h0 is not strongly regular"
        assert G.contains(self.h0) and I.contains(self.i0)
        if self.theta is not None:
            for a in self.g_indices:
                for b in self.g_indices:
                    x, y = A.basis_vector(a), A.basis_vector(b)
                    lhs = self.theta_of(bracket(A, x, y))
                    rhs = bracket(A, self.theta_of(x), y)
                    assert lhs == rhs, f"theta is not a module map on ({a}, {b})"


def _eigen_label_values(A: Algebra, h0: Sequence, indices: Sequence[int], side: str) -> tuple:
    out = []
    for idx in indices:
        v = A.basis_vector(idx)
        img = bracket(A, h0, v) if side == "left" else bracket(A, v, h0)
        c = img[idx]
        if img != vscale(c, v):
            raise ValueError(f"basis vector {A.basis_names[idx]} is not an eigenvector of h0")
        if side == "left" and c == 0:
            continue
        out.append((A.basis_names[idx], c))
    return tuple(out)


def _sl2_extension(m: int, sl2_products: dict, action: dict, names: Sequence[str], theta_images=None,
                   name: str = "") -> SimpleDecomposition:
    dim = 3 + m
    prods = {k: dict(v) for k, v in sl2_products.items()}
    for (k, g), img in action.items():
        prods[(3 + k, g)] = {3 + k2: c for k2, c in img.items()}
    A = Algebra(dim, prods, list(names), name=name)
    h0 = A.basis_vector(H)
    i0 = tuple(Fraction(0) if i < 3 else Fraction(1) for i in range(dim))
    theta = None
    if theta_images is not None:
        theta = RatMatrix.from_columns([theta_images[g] for g in (H, E, F)])
    dec = SimpleDecomposition(
        algebra=A,
        g_indices=(0, 1, 2),
        i_indices=tuple(range(3, dim)),
        h0=h0,
        i0=i0,
        roots=_eigen_label_values(A, h0, (0, 1, 2), "left"),
        weights=_eigen_label_values(A, h0, range(3, dim), "right"),
        theta=theta,
        sl2={"h": H, "e": E, "f": F},
    )
    dec.validate()
    return dec


def make_simple_sl2(m: int) -> SimpleDecomposition:
    """sl2 + V_m with [L, I] = 0, h0 = h and i0 = x_0 + ... + x_{m-1}."""
    if m < 2:
        raise ValueError("the module must have dimension >= 2")
    names = list(SL2_NAMES) + [f"x{k}" for k in range(m)]
    theta_images = None
    if m == 3:
        # columns: images of h, e, f in the x-basis
        theta_images = {H: (0, 2, 0), E: (0, 0, 1), F: (2, 0, 0)}
    return _sl2_extension(m, _sl2_products(), make_sl2_module(m), names, theta_images, name=f"sl2_v{m}")


# the printed 6-dimensional table: e lowers, f raises
_PRINTED_SL2 = {
    (E, H): {E: 2}, (H, F): {F: 2}, (E, F): {H: 1},
    (H, E): {E: -2}, (F, H): {F: -2}, (F, E): {H: -1},
}
_PRINTED_ACTION = {
    (1, E): {0: -2}, (2, E): {1: -2},
    (0, F): {1: 1}, (1, F): {2: 1},
    (0, H): {0: 2}, (2, H): {2: -2},
}

# index in the constructor convention -> index in the printed table
PRINTED_RELABELING = (0, 2, 1, 3, 4, 5)


def printed_sl2_v3() -> Algebra:
    return printed_sl2_v3_decomposition().algebra


def printed_sl2_v3_decomposition() -> SimpleDecomposition:
    """The 6-dimensional algebra exactly as printed, with theta(h)=2x1, theta(e)=2x0, theta(f)=x2."""
    names = ["h", "e", "f", "x0", "x1", "x2"]
    theta_images = {H: (0, 2, 0), E: (2, 0, 0), F: (0, 0, 1)}
    return _sl2_extension(3, _PRINTED_SL2, _PRINTED_ACTION, names, theta_images, name="sl2_v3_printed")


def relabeling_matrix() -> RatMatrix:
    """Permutation matrix P with P(constructor basis vector i) = printed basis vector PRINTED_RELABELING[i]."""
    n = len(PRINTED_RELABELING)
    cols = [[1 if r == PRINTED_RELABELING[c] else 0 for r in range(n)] for c in range(n)]
    return RatMatrix.from_columns(cols)


def spin_up(dec: SimpleDecomposition, v: Sequence) -> Subspace:
    """Smallest subspace containing v and closed under x -> [x, g] for g in G."""
    A = dec.algebra
    gens = [A.basis_vector(g) for g in dec.g_indices]
    cur = Subspace.span([v], A.dim)
    while True:
        nxt = Subspace.span(list(cur.basis) + [bracket(A, b, g) for b in cur.basis for g in gens], A.dim)
        if nxt == cur:
            return cur
        cur = nxt


# hypotheses for the nonlinear 2-local construction -------------------------

def two_local_certificate(A: Algebra) -> dict:
    L2 = derived_algebra(A)
    ann = annihilator(A)
    return {
        "name": A.name,
        "n": A.dim,
        "dim_L2": L2.dim,
        "dim_ann": ann.dim,
        "small_square": L2.dim <= A.dim - 2,
        "nontrivial_annihilator": ann.dim > 0,
        "nilindex": nilindex(A),
    }


def two_local_candidates() -> list:
    """Catalog nilpotent algebras with dim L^2 <= n - 2 and nonzero annihilator, each with its certificate."""
    pool = [
        make_filiform(FiliformParams.zero("F1", 5)),
        make_filiform(FiliformParams.zero("F1", 6)),
        make_filiform(FiliformParams.zero("F2", 5)),
        make_filiform(FiliformParams.zero("F2", 6)),
        make_filiform(FiliformParams.zero("F3", 5)),
        make_abelian(2),
        make_abelian(3),
    ] + [make_nf(n) for n in range(2, 7)]
    out = []
    for A in pool:
        cert = two_local_certificate(A)
        if cert["small_square"] and cert["nontrivial_annihilator"]:
            out.append((A, cert))
    return out


# named catalog and golden files ----------------------------------------------

def _filiform_variants() -> dict:
    out = {}
    for n in (5, 6):
        for fam in ("F1", "F2", "F3"):
            out[f"{fam.lower()}-n{n}-zero"] = FiliformParams.zero(fam, n)
        out[f"f1-n{n}-theta"] = FiliformParams("F1", n, (0,) * (n - 3) + (1,))
        out[f"f2-n{n}-gamma"] = FiliformParams("F2", n, (0,) * (n - 2) + (1,))
        out[f"f3-n{n}-theta1"] = FiliformParams("F3", n, (1, 0, 0))
    return out


FILIFORM_VARIANTS = _filiform_variants()


def catalog_names() -> list:
    names = [f"nf{n}" for n in range(2, 9)]
    names += sorted(FILIFORM_VARIANTS)
    names += ["sl2"] + [f"simple-sl2-v{m}" for m in range(2, 6)] + ["sl2-v3-printed", "abelian3"]
    return names


GOLDEN_NAMES = (
    [f"nf{n}" for n in range(4, 9)]
    + sorted(FILIFORM_VARIANTS)
    + ["sl2"] + [f"simple-sl2-v{m}" for m in range(2, 6)] + ["sl2-v3-printed"]
)


def build(name: str) -> Algebra:
    """Build a catalog algebra by name (see :func:`catalog_names`)."""
    if name.startswith("nf") and name[2:].isdigit():
        return make_nf(int(name[2:]))
    if name.startswith("abelian") and name[7:].isdigit():
        return make_abelian(int(name[7:]))
    if name in FILIFORM_VARIANTS:
        A = make_filiform(FILIFORM_VARIANTS[name])
        A.name = name
        return A
    if name == "sl2":
        return make_sl2()
    if name.startswith("simple-sl2-v") and name[12:].isdigit():
        return make_simple_sl2(int(name[12:])).algebra
    if name == "sl2-v3-printed":
        return printed_sl2_v3()
    raise KeyError(f"unknown catalog algebra {name!r}")


def decomposition(name: str) -> SimpleDecomposition:
    if name.startswith("simple-sl2-v") and name[12:].isdigit():
        return make_simple_sl2(int(name[12:]))
    if name == "sl2-v3-printed":
        return printed_sl2_v3_decomposition()
    raise KeyError(f"{name!r} has no stored simple decomposition")


def golden_filename(name: str) -> str:
    return name.replace("-", "_") + ".json"
