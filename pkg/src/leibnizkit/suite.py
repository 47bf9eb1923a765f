"""Report records and the full verification suite run by ``leibnizkit paper-suite``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .algebra import LinearMap, algebra_to_json, check_leibniz, is_derivation, load_algebra
from .automorphisms import (
    build_two_local_aut,
    highest_weight_eigen_machinery,
    nf_aut_suite,
    rigidity_aut_check,
    sl2_v3_fixed_point_analysis,
    verify_two_local_aut,
)
from .catalog import GOLDEN_DIR, GOLDEN_NAMES, build, decomposition, golden_filename, make_sl2
from .derivations import compute_der, rigidity_stabilizer, stabilizer, vanishes_on, verify_decomposition
from .linalg import RatMatrix, Subspace, format_rational
from .local import (
    DEFAULT_SEED,
    build_filiform_local_nonderivation,
    certify_local,
    filiform_operator,
    filiform_witness_selector,
    random_points,
    simple_local_certificate,
    structured_samples,
)
from .twolocal import (
    HypothesisError,
    build_two_local,
    nf_rigidity_check,
    nonlinearity_witness,
    pair_samples,
    verify_two_local_derivation,
)


class GoldenFileMissing(FileNotFoundError):
    pass


def to_jsonable(obj):
    """Convert Fractions, tuples, matrices and maps to plain JSON values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, LinearMap):
        return to_jsonable(obj.matrix)
    if isinstance(obj, RatMatrix):
        return [[format_rational(a) for a in r] for r in obj.rows]
    if isinstance(obj, Subspace):
        return {"dim": obj.dim, "basis": to_jsonable(obj.basis)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):
        raise TypeError("floats never enter reports")
    return str(obj)


@dataclass
class Record:
    check_id: str
    claim: str
    inputs: list
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "claim": self.claim,
            "inputs": to_jsonable(self.inputs),
            "verdict": "pass" if self.passed else "fail",
            "details": to_jsonable(self.details),
        }


@dataclass
class Report:
    seed: int
    records: list = field(default_factory=list)
    title: str = "leibnizkit report"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failing(self) -> list:
        return [r.check_id for r in self.records if not r.passed]

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def to_dict(self) -> dict:
        return {
            "tool": "leibnizkit",
            "version": __version__,
            "title": self.title,
            "seed": self.seed,
            "records": [r.to_dict() for r in sorted(self.records, key=lambda r: r.check_id)],
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.title} (seed {self.seed})"]
        for r in sorted(self.records, key=lambda r: r.check_id):
            lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.check_id}: {r.claim}")
            for k, v in r.details.items():
                if k.startswith("_"):
                    continue
                lines.append(f"    {k}: {_short(v)}")
        lines.append(f"overall: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        lines = [f"# {self.title}", "", f"- tool version: {__version__}", f"- seed: {self.seed}",
                 f"- overall: **{'pass' if self.passed else 'fail'}**", "",
                 "| check | claim | inputs | verdict |", "|---|---|---|---|"]
        for r in sorted(self.records, key=lambda r: r.check_id):
            inputs = ", ".join(str(i) for i in r.inputs)
            lines.append(f"| {r.check_id} | {r.claim} | {inputs} | {'pass' if r.passed else 'FAIL'} |")
        lines.append("")
        for r in sorted(self.records, key=lambda r: r.check_id):
            lines.append(f"## {r.check_id}")
            lines.append("")
            lines.append(r.claim)
            lines.append("")
            lines.append("```json")
            lines.append(json.dumps(to_jsonable(r.details), indent=1))
            lines.append("```")
            lines.append("")
        return "\n".join(lines)


def _short(v) -> str:
    text = json.dumps(to_jsonable(v))
    return text if len(text) <= 160 else text[:157] + "..."


# golden files ------------------------------------------------------------------

def golden_path(name: str, golden_dir=None) -> Path:
    return Path(golden_dir or GOLDEN_DIR) / golden_filename(name)


def load_golden(golden_dir=None) -> dict:
    """Load every golden algebra; raises GoldenFileMissing naming the first absent file."""
    out = {}
    for name in GOLDEN_NAMES:
        path = golden_path(name, golden_dir)
        if not path.exists():
            raise GoldenFileMissing(f"missing golden file: {path}")
        out[name] = load_algebra(path, check=False)
        out[name].name = name
    return out


def write_golden(golden_dir=None) -> list:
    paths = []
    for name in GOLDEN_NAMES:
        path = golden_path(name, golden_dir)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(algebra_to_json(build(name)), encoding="utf-8")
        paths.append(path)
    return paths


# the checks ------------------------------------------------------------------------

FAMILIES = {"f1": "F1", "f2": "F2", "f3": "F3"}


def check_identity(golden: dict) -> Record:
    details = {}
    ok = True
    for name, A in golden.items():
        good, triple = check_leibniz(A)
        same = A == build(name)
        details[name] = "ok" if good and same else ("matches constructor, identity fails" if same else "differs from constructor")
        ok = ok and good and same
    return Record("C01", "Leibniz identity holds on every golden catalog table", sorted(golden), ok, details)


def check_decompositions(golden: dict) -> Record:
    details = {}
    expected = {2: 4, 3: 5, 4: 4, 5: 4}
    ok = True
    for m, dim in expected.items():
        name = f"simple-sl2-v{m}"
        dec = decomposition(name)
        rep = verify_decomposition(dec)
        rep["golden_matches"] = golden[name] == dec.algebra
        details[name] = rep
        ok = ok and rep["ok"] and rep["dim_der"] == dim and rep["golden_matches"]
    return Record("C02", "Der = inner + <pr_I> (+ <theta> when G and I are isomorphic), direct and exact",
                  [f"simple-sl2-v{m}" for m in expected], ok, details)


def check_rigidity() -> Record:
    details = {}
    ok = True
    for m in (2, 3, 4, 5):
        dec = decomposition(f"simple-sl2-v{m}")
        der = compute_der(dec.algebra, dec)
        st = rigidity_stabilizer(dec, der=der)
        vanish = all(vanishes_on(dec.algebra, b, dec.i_indices) for b in st.basis)
        details[f"simple-sl2-v{m}"] = {"stabilizer_dim": st.dim, "vanishes_on_I": vanish}
        ok = ok and st.dim == 0 and vanish
    A = make_sl2()
    contrast = stabilizer(compute_der(A), A.basis_vector(0)).dim
    details["sl2 at h"] = {"stabilizer_dim": contrast}
    ok = ok and contrast >= 1
    return Record("C03", "derivations killing h0 + i0 vanish on simple sl2 + V_m; plain sl2 has nonzero ones at h",
                  ["simple-sl2-v2..v5", "sl2"], ok, details)


def check_local_simple() -> Record:
    details = {}
    ok = True
    for m in (2, 3, 4):
        cert = simple_local_certificate(decomposition(f"simple-sl2-v{m}"))
        details[f"simple-sl2-v{m}"] = dict(cert.dims, verdict=cert.verdict)
        ok = ok and cert.verdict == "equal"
    return Record("C04", "certified local-derivation superspace equals Der on simple sl2 + V_m",
                  ["simple-sl2-v2", "simple-sl2-v3", "simple-sl2-v4"], ok, details)


def check_local_filiform(golden: dict, seed: int) -> Record:
    details = {}
    ok = True
    for n in (5, 6):
        for prefix, fam in FAMILIES.items():
            name = f"{prefix}-n{n}-zero"
            A = golden[name]
            der = compute_der(A)
            delta = build_filiform_local_nonderivation(A, fam)
            sel = filiform_witness_selector(A, fam)
            samples = structured_samples(A.dim, seed, degenerate=sel.degenerate)
            good, log = certify_local(A, delta, samples, sel, der)
            on_stratum = sum(1 for p in samples if sum(a * b for a, b in zip(sel.degenerate, p)) == 0)
            d1 = is_derivation(A, filiform_operator(A, fam, 1, 1))
            rec = {
                "delta_is_derivation": is_derivation(A, delta),
                "alpha_beta_one_is_derivation": d1,
                "samples": len(samples),
                "degenerate_samples": on_stratum,
                "all_samples_pass": good,
                "dim_der": der.dim,
            }
            details[name] = rec
            ok = ok and good and d1 and not rec["delta_is_derivation"] and on_stratum > 0
    details["_random_head"] = random_points(5, 2, seed)
    return Record("C05", "filiform operators with alpha=1, beta=0 are local derivations but not derivations",
                  [f"{p}-n{n}-zero" for n in (5, 6) for p in FAMILIES], ok, details)


def check_two_local(golden: dict, seed: int, extra_pairs: int = 0) -> Record:
    details = {}
    ok = True
    for name in ("f1-n5-zero", "abelian3"):
        A = golden.get(name) or build(name)
        T = build_two_local(A)
        pairs = pair_samples(A.dim, seed, extra_pairs)
        rep = verify_two_local_derivation(T, pairs)
        v1, v2 = nonlinearity_witness(T)
        details[name] = {
            "map": T.to_dict(),
            "pairs": rep.pairs_tested,
            "failures": len(rep.failures),
            "nonadditive_on": [v1, v2],
        }
        ok = ok and rep.passed and rep.pairs_tested >= 500
    return Record("C06", "nonlinear annihilator-valued maps are 2-local derivations", ["f1-n5-zero", "abelian3"],
                  ok, details)


def check_nf_derivations() -> Record:
    details = {}
    ok = True
    for n in range(2, 9):
        rep = nf_rigidity_check(n)
        details[f"nf{n}"] = rep
        ok = ok and rep["ok"]
    return Record("C07", "derivations of NF_n are fixed by their value on e1 and follow the closed form",
                  [f"nf{n}" for n in range(2, 9)], ok, details)


def check_fixed_points(golden: dict) -> Record:
    res = sl2_v3_fixed_point_analysis()
    sols = res["solutions"]
    params = sorted(s["params"] for s in sols)
    A = res["solutions"][0]["map"].algebra if sols else None
    ok = params == [(-1, 1, -1), (1, 0, 1)] and all(s["is_automorphism"] and s["fixes_point"] for s in sols)
    for s in sols:
        if s["params"] == (1, 0, 1):
            ok = ok and s["is_identity"]
        else:
            ok = ok and s["gg_e_image"] == tuple(-c for c in A.basis_vector(A.index("e")))
            ok = ok and s["gg_f_image"] == tuple(-c for c in A.basis_vector(A.index("f")))
    ok = ok and golden["sl2-v3-printed"] == decomposition("sl2-v3-printed").algebra
    details = {
        "point": res["point"],
        "solutions": [{k: v for k, v in s.items() if k != "map"} | {"matrix": s["map"]} for s in sols],
        "torus_exponents": res["exponents"],
    }
    return Record("C08", "torus-family automorphisms of the printed 6-dim table fixing h + x0 + x1 + x2",
                  ["sl2-v3-printed"], ok, details)


def check_aut_rigidity() -> Record:
    details = {}
    ok = True
    for m in (2, 4, 5):
        res = rigidity_aut_check(decomposition(f"simple-sl2-v{m}"))
        details[f"simple-sl2-v{m}"] = {
            "solutions": [s["params"] for s in res["solutions"]],
            "exponents": res["exponents"],
            "exponents_injective": res["exponents_injective"],
            "unique_identity": res["unique_identity"],
        }
        ok = ok and res["unique_identity"] and res["exponents_injective"]
    details["simple-sl2-v3"] = "handled by C08"
    return Record("C09", "the only torus-family automorphism fixing h0 + i0 is the identity (m != 3)",
                  ["simple-sl2-v2", "simple-sl2-v4", "simple-sl2-v5"], ok, details)


def check_eigen_machinery(seed: int) -> Record:
    details = {}
    ok = True
    for n in range(1, 7):
        rep = highest_weight_eigen_machinery(n, seed)
        details[f"n={n}"] = {k: rep[k] for k in ("matches_bidiagonal", "eigenvector", "recurrence",
                                                  "case1_iff_lambda_nonzero")}
        ok = ok and rep["ok"] and rep["t0_nonzero"]
    return Record("C10", "R_(h+e) on V_(n+1) is bidiagonal with eigenvalue n; id_G + omega theta + lambda id_I "
                  "is an automorphism iff lambda != 0", [f"V_{n + 1}" for n in range(1, 7)], ok, details)


def check_two_local_aut(golden: dict, seed: int, extra_pairs: int = 0) -> Record:
    A = golden["f1-n5-zero"]
    T = build_two_local_aut(A)
    pairs = pair_samples(A.dim, seed, extra_pairs)
    rep = verify_two_local_aut(T, pairs)
    v1, v2 = nonlinearity_witness(T)
    try:
        build_two_local_aut(golden["nf5"])
        rejection = None
    except HypothesisError as exc:
        rejection = str(exc)
    nf = {f"nf{n}": nf_aut_suite(n, seed)["ok"] for n in range(3, 9)}
    ok = rep.passed and rejection is not None and rejection.startswith("(i)") and all(nf.values())
    details = {
        "construction": "reconstruction: identity plus an annihilator-valued nonlinear term",
        "map": T.to_dict(),
        "pairs": rep.pairs_tested,
        "failures": len(rep.failures),
        "nonadditive_on": [v1, v2],
        "nf5_rejected": rejection,
        "nf_automorphism_rigidity": nf,
    }
    return Record("C11", "2-local automorphisms that are not automorphisms; NF_n automorphisms fixed by e1",
                  ["f1-n5-zero", "nf3..nf8"], ok, details)


def check_suite_inputs(golden: dict, report: Report) -> Record:
    ids = sorted(r.check_id for r in report.records)
    ok = ids == [f"C{k:02d}" for k in range(1, 12)] and len(golden) == len(GOLDEN_NAMES)
    details = {"golden_files": len(golden), "records": ids}
    return Record("C12", "suite ran over all golden files with one record per check", ["golden catalog"], ok, details)


CHECKS: list = [
    ("C01", lambda g, s, x: check_identity(g)),
    ("C02", lambda g, s, x: check_decompositions(g)),
    ("C03", lambda g, s, x: check_rigidity()),
    ("C04", lambda g, s, x: check_local_simple()),
    ("C05", lambda g, s, x: check_local_filiform(g, s)),
    ("C06", lambda g, s, x: check_two_local(g, s, x)),
    ("C07", lambda g, s, x: check_nf_derivations()),
    ("C08", lambda g, s, x: check_fixed_points(g)),
    ("C09", lambda g, s, x: check_aut_rigidity()),
    ("C10", lambda g, s, x: check_eigen_machinery(s)),
    ("C11", lambda g, s, x: check_two_local_aut(g, s, x)),
]


def run_suite(seed: int = DEFAULT_SEED, golden_dir=None, extra_pairs: int = 0,
              only: Callable[[str], bool] | None = None) -> Report:
    golden = load_golden(golden_dir)
    report = Report(seed, title="leibnizkit verification suite")
    for cid, fn in CHECKS:
        if only is None or only(cid):
            report.add(fn(golden, seed, extra_pairs))
    if only is None:
        report.add(check_suite_inputs(golden, report))
    return report


__all__ = [
    "GoldenFileMissing", "Record", "Report", "load_golden", "write_golden", "golden_path", "run_suite",
    "to_jsonable", "CHECKS",
]
