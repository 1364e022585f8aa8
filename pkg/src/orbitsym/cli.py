"""Command line front end: group catalog, character grammar, job runner.

Seven subcommands (group, chartable, gensym, classify, oracle, verify,
explore) share one report convention: a JSON object with a "schema"
field, rendered deterministically.  Exit code 0 means the job ran and
its report is positive, 1 means the job ran but reports a mathematical
failure (a persistent theory/oracle mismatch, a search past its
budget), 2 means the inputs were rejected.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .chars import (
    Character,
    character_table,
    character_table_to_json,
    conjugacy_classes,
    irreducible_multiplicities,
    kernel_of,
    product_character,
    rational_ideal_characters,
    regular_character,
    trivial_character,
)
from .classify import (
    classify_affine,
    classify_euclidean,
    classify_rational,
    nker_R,
    verdict_to_json,
)
from .errors import (
    BadParameter,
    NotAGenericSymmetry,
    OrbitsymError,
    PersistentMismatch,
    SchemaError,
    SearchBudgetExceeded,
    ValidationFailure,
)
from .exact import RationalMatrix, cyclo_from_json, cyclo_is_rational, rat_to_str
from .gensym import (
    DEFAULT_BUDGET,
    explore_abelian_closure,
    sym_group_of_character,
    sym_result_to_json,
)
from .groups import FiniteGroup, builtin_group, is_abelian
from .oracle import (
    RationalRepresentation,
    ideal_component_rep,
    linear_symmetry_group,
    rep_from_json,
    sample_generic_point,
    verify_theory_vs_oracle,
)

SCHEMA = "orbitsym/1"

# jobs that ran to completion but report a failed mathematical check
_MATH_FAILURES = (
    PersistentMismatch,
    SearchBudgetExceeded,
    ValidationFailure,
    NotAGenericSymmetry,
)

# batch verification stays at desk scale
BATCH_VERIFY_MAX_ORDER = 16


def catalog(products: bool = False) -> list[str]:
    """Constructor specs for the built-in sweep of small groups.

    All cyclic, elementary abelian, dihedral, and dicyclic groups of
    order up to 32, the quaternion group, and its products with C4, Q8,
    and C7.  With products=True, every direct product of two catalog
    members of combined order up to 64 is appended.
    """
    specs = [f"cyclic({n})" for n in range(1, 33)]
    specs += [
        f"elem_abelian({p},{r})"
        for p, r in ((2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2))
    ]
    specs += [f"dihedral({n})" for n in range(3, 17)]
    specs += [f"dicyclic({n})" for n in range(2, 9)]
    specs += [
        "quaternion8",
        "product(quaternion8,cyclic(4))",
        "product(quaternion8,quaternion8)",
        "product(quaternion8,cyclic(7))",
    ]
    if products:
        base = list(specs)
        orders = {s: builtin_group(s).order for s in base}
        have = set(specs)
        for i, a in enumerate(base):
            for b in base[i:]:
                if orders[a] * orders[b] <= 64:
                    spec = f"product({a},{b})"
                    if spec not in have:
                        have.add(spec)
                        specs.append(spec)
    return specs


# ---------------------------------------------------------------------------
# the character mini-grammar


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|[()+,*])")

_NAME_HELP = (
    "trivial, regular, lambda (first faithful linear), alpha (first"
    " faithful degree-2), sigma or sigma(i) (i-th nontrivial real linear),"
    " irr(i), ideal(i), conj(expr), cross(expr,expr), n*expr, expr+expr"
)


def _tokenize_char(text: str) -> list[str]:
    out = []
    i = 0
    text = text.rstrip()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise BadParameter(f"cannot read character expression at {text[i:]!r}")
        out.append(m.group(1))
        i = m.end()
    return out


def _factors_of(g: FiniteGroup):
    """The two factor groups when the label is a product spec."""
    label = g.label
    if not (label.startswith("product(") and label.endswith(")")):
        return None
    inner = label[len("product(") : -1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return builtin_group(inner[:i]), builtin_group(inner[i + 1 :])
    return None


def _named_char(g: FiniteGroup, name: str) -> Character:
    t = character_table(g)
    if name == "trivial":
        return trivial_character(g)
    if name == "regular":
        return regular_character(g)
    if name == "lambda":
        for chi in t.irreducibles:
            if cyclo_is_rational(chi.degree) == 1 and kernel_of(chi).order == 1:
                return chi
        raise BadParameter(f"{g.label} has no faithful linear character")
    if name == "alpha":
        for chi in t.irreducibles:
            if cyclo_is_rational(chi.degree) == 2 and kernel_of(chi).order == 1:
                return chi
        raise BadParameter(f"{g.label} has no faithful degree-2 irreducible")
    if name == "sigma":
        return _sigma_char(g, 1)
    raise BadParameter(f"unknown character name {name!r}; known forms: {_NAME_HELP}")


def _sigma_char(g: FiniteGroup, i: int) -> Character:
    t = character_table(g)
    seen = 0
    for chi in t.irreducibles:
        if (
            cyclo_is_rational(chi.degree) == 1
            and chi.is_real_valued()
            and any(cyclo_is_rational(v) != 1 for v in chi.values)
        ):
            seen += 1
            if seen == i:
                return chi
    raise BadParameter(f"{g.label} has only {seen} nontrivial real linear characters")


class _CharParser:
    def __init__(self, text: str):
        self.toks = _tokenize_char(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None:
            raise BadParameter("character expression ends unexpectedly")
        if expect is not None and tok != expect:
            raise BadParameter(f"expected {expect!r}, found {tok!r}")
        self.pos += 1
        return tok

    def parse(self, g: FiniteGroup) -> Character:
        chi = self.expr(g)
        if self.peek() is not None:
            raise BadParameter(f"trailing input after expression: {self.peek()!r}")
        return chi

    def expr(self, g: FiniteGroup) -> Character:
        chi = self.term(g)
        while self.peek() == "+":
            self.take()
            chi = chi + self.term(g)
        return chi

    def term(self, g: FiniteGroup) -> Character:
        tok = self.peek()
        if tok is not None and tok.isdigit():
            n = int(self.take())
            self.take("*")
            return self.factor(g) * n
        return self.factor(g)

    def factor(self, g: FiniteGroup) -> Character:
        tok = self.take()
        if tok == "(":
            chi = self.expr(g)
            self.take(")")
            return chi
        if not tok[0].isalpha() and tok[0] != "_":
            raise BadParameter(f"expected a character name, found {tok!r}")
        if self.peek() != "(":
            return _named_char(g, tok)
        self.take("(")
        if tok == "conj":
            chi = self.expr(g)
            self.take(")")
            return chi.conj()
        if tok == "cross":
            factors = _factors_of(g)
            if factors is None:
                raise BadParameter(
                    f"cross(...) needs a direct product group, got {g.label}"
                )
            left = self.expr(factors[0])
            self.take(",")
            right = self.expr(factors[1])
            self.take(")")
            return product_character(g, left, right)
        if tok in ("irr", "ideal", "sigma"):
            idx = self.take()
            if not idx.isdigit():
                raise BadParameter(f"{tok}(...) needs an integer index, got {idx!r}")
            self.take(")")
            i = int(idx)
            t = character_table(g)
            if tok == "irr":
                if i >= len(t.irreducibles):
                    raise BadParameter(
                        f"irr({i}) out of range; {g.label} has"
                        f" {len(t.irreducibles)} irreducibles"
                    )
                return t.irreducibles[i]
            if tok == "ideal":
                ideals = rational_ideal_characters(t)
                if i >= len(ideals):
                    raise BadParameter(
                        f"ideal({i}) out of range; {g.label} has"
                        f" {len(ideals)} rational ideal components"
                    )
                return ideals[i]
            if i < 1:
                raise BadParameter("sigma(i) indexes from 1")
            return _sigma_char(g, i)
        raise BadParameter(f"unknown character function {tok!r}; known forms: {_NAME_HELP}")


def parse_character(g: FiniteGroup, text: str) -> Character:
    """Read a character: multiplicity vector, class values, or expression.

    A JSON list is multiplicities over the computed irreducibles, a JSON
    object carries explicit per-class cyclotomic values under "values",
    anything else goes through the name grammar.
    """
    s = text.strip()
    if s.startswith("["):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad multiplicity vector: {exc}") from exc
        t = character_table(g)
        if len(data) != len(t.irreducibles):
            raise SchemaError(
                f"expected {len(t.irreducibles)} multiplicities, got {len(data)} at /"
            )
        chi = trivial_character(g) * 0
        for i, m in enumerate(data):
            if not isinstance(m, int) or m < 0:
                raise SchemaError(f"multiplicity must be a non-negative integer at /{i}")
            if m:
                chi = chi + t.irreducibles[i] * m
        return chi
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad character object: {exc}") from exc
        if "schema" in obj and obj["schema"] != SCHEMA:
            raise SchemaError(f"unsupported schema {obj['schema']!r} at /schema")
        vals = obj.get("values")
        if not isinstance(vals, list):
            raise SchemaError("expected a list of class values at /values")
        return Character.from_values(
            g, [cyclo_from_json(v, f"/values/{i}") for i, v in enumerate(vals)]
        )
    return _CharParser(s).parse(g)


# ---------------------------------------------------------------------------
# representations for oracle jobs


def _direct_sum_rep(g: FiniteGroup, parts) -> RationalRepresentation:
    if len(parts) == 1:
        return parts[0]
    dim = sum(p.dim for p in parts)
    zero = Fraction(0)
    mats = []
    for x in range(g.order):
        rows = [[zero] * dim for _ in range(dim)]
        off = 0
        for p in parts:
            for i, row in enumerate(p.matrices[x].entries):
                rows[off + i][off : off + p.dim] = row
            off += p.dim
        mats.append(RationalMatrix.from_rows(rows))
    chi = parts[0].character
    for p in parts[1:]:
        chi = chi + p.character
    return RationalRepresentation(g, dim, tuple(mats), chi)


def rep_for_character(g: FiniteGroup, chi: Character) -> RationalRepresentation:
    """A rational representation affording chi, assembled from the
    ideal components; chi must be a sum of rational ideal characters."""
    t = character_table(g)
    mults = irreducible_multiplicities(chi)
    parts = []
    for orb, gamma in zip(t.galois_orbits, rational_ideal_characters(t)):
        deg = int(cyclo_is_rational(t.irreducibles[orb[0]].degree))
        copies, rem = divmod(mults[orb[0]], deg)
        if rem or any(mults[i] != copies * deg for i in orb):
            raise BadParameter(
                "character is not a sum of rational ideal components;"
                " multiplicities must be proportional to degrees on each"
                " galois orbit"
            )
        parts.extend([ideal_component_rep(g, gamma)] * copies)
    if not parts:
        raise BadParameter("the zero character has no representation")
    return _direct_sum_rep(g, parts)


def _load_rep(g: FiniteGroup, path: str) -> RationalRepresentation:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise BadParameter(f"cannot read representation file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"representation file {path} is not JSON: {exc}") from exc
    return rep_from_json(g, obj)


# ---------------------------------------------------------------------------
# jobs


@dataclass(frozen=True)
class JobSpec:
    """One deterministic unit of work: (inputs, seed, budgets) fix the report."""

    command: str
    inputs: dict
    seed: int = 0
    budgets: dict = field(default_factory=dict)
    output: str | None = None


def _budget(job: JobSpec) -> int:
    b = job.budgets.get("budget")
    return DEFAULT_BUDGET if b is None else b


def _group_of(job: JobSpec) -> FiniteGroup:
    spec = job.inputs.get("group")
    if not spec:
        raise BadParameter("a --group spec is required")
    return builtin_group(spec)


def _cmd_group(job: JobSpec) -> dict:
    g = _group_of(job)
    cd = conjugacy_classes(g)
    return {
        "schema": SCHEMA,
        "command": "group",
        "group": g.label,
        "order": g.order,
        "exponent": g.exponent,
        "abelian": is_abelian(g),
        "class_count": cd.count,
        "element_orders": list(g.orders),
    }


def _cmd_chartable(job: JobSpec) -> dict:
    g = _group_of(job)
    return {
        "schema": SCHEMA,
        "command": "chartable",
        "group": g.label,
        "table": character_table_to_json(character_table(g)),
    }


def _cmd_gensym(job: JobSpec) -> dict:
    g = _group_of(job)
    text = job.inputs.get("char")
    if not text:
        raise BadParameter("gensym needs a --char expression")
    chi = parse_character(g, text)
    res = sym_group_of_character(chi, _budget(job))
    report = sym_result_to_json(res)
    report.update({"command": "gensym", "group": g.label, "char": text})
    return report


_CLASSIFIERS = {
    "euclidean": classify_euclidean,
    "affine": classify_affine,
    "rational": classify_rational,
}


def _cmd_classify(job: JobSpec) -> dict:
    mode = job.inputs.get("mode")
    if mode not in _CLASSIFIERS:
        raise BadParameter(f"--mode must be one of {sorted(_CLASSIFIERS)}, got {mode!r}")
    decide = _CLASSIFIERS[mode]
    spec = job.inputs.get("group")
    if spec == "catalog":
        jobs = []
        for member in catalog():
            g = builtin_group(member)
            v = decide(g)
            jobs.append(
                {
                    "group": g.label,
                    "realizable": v.realizable,
                    "matched_case": v.matched_case,
                }
            )
        return {"schema": SCHEMA, "command": "classify", "mode": mode, "jobs": jobs}
    g = _group_of(job)
    report = verdict_to_json(decide(g))
    report.update(
        {
            "command": "classify",
            "mode": mode,
            "group": g.label,
            "nker_R_order": nker_R(g).order,
        }
    )
    return report


def _rep_for_job(job: JobSpec, g: FiniteGroup) -> RationalRepresentation:
    rep_path = job.inputs.get("rep")
    text = job.inputs.get("char")
    if rep_path and text:
        raise BadParameter("give either --rep or --char, not both")
    if rep_path:
        return _load_rep(g, rep_path)
    if text:
        return rep_for_character(g, parse_character(g, text))
    raise BadParameter("either --rep or --char is required")


def _cmd_oracle(job: JobSpec) -> dict:
    g = _group_of(job)
    rep = _rep_for_job(job, g)
    bound = job.budgets.get("bound") or 99
    od = sample_generic_point(rep, seed=job.seed, bound=bound)
    lsg = linear_symmetry_group(od, _budget(job))
    return {
        "schema": SCHEMA,
        "command": "oracle",
        "group": g.label,
        "dim": rep.dim,
        "base_point": [rat_to_str(x) for x in od.base_point],
        "orbit_size": len(od.points),
        "stabilizer_order": od.stabilizer.order,
        "oracle_order": lsg.order,
        "generator_count": len(lsg.matrices),
    }


def _cmd_verify(job: JobSpec) -> dict:
    trials = job.budgets.get("trials") or 3
    spec = job.inputs.get("group")
    if spec == "catalog":
        jobs = []
        for member in catalog():
            g = builtin_group(member)
            if g.order > BATCH_VERIFY_MAX_ORDER:
                continue
            rep = rep_for_character(g, regular_character(g))
            result = verify_theory_vs_oracle(
                rep, rep.character, trials=trials, seed=job.seed, budget=_budget(job)
            )
            jobs.append(
                {
                    "group": g.label,
                    "theory_order": result["theory_order"],
                    "passed": result["passed"],
                }
            )
        return {
            "schema": SCHEMA,
            "command": "verify",
            "max_order": BATCH_VERIFY_MAX_ORDER,
            "jobs": jobs,
        }
    g = _group_of(job)
    rep = _rep_for_job(job, g)
    report = verify_theory_vs_oracle(
        rep, rep.character, trials=trials, seed=job.seed, budget=_budget(job)
    )
    report["command"] = "verify"
    return report


def _cmd_explore(job: JobSpec) -> dict:
    g = _group_of(job)
    found = explore_abelian_closure(g, _budget(job))
    report = {
        "schema": SCHEMA,
        "command": "explore",
        "group": g.label,
        "found": found is not None,
        "multiplicities": None,
        "degree": None,
        "faithful_linear": False,
    }
    if found is not None:
        report["multiplicities"] = list(irreducible_multiplicities(found))
        report["degree"] = int(cyclo_is_rational(found.degree))
        report["faithful_linear"] = (
            report["degree"] == 1 and kernel_of(found).order == 1
        )
    return report


_COMMANDS = {
    "group": _cmd_group,
    "chartable": _cmd_chartable,
    "gensym": _cmd_gensym,
    "classify": _cmd_classify,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
    "explore": _cmd_explore,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; (exit code, JSON-ready report)."""
    handler = _COMMANDS.get(job.command)
    if handler is None:
        return 2, _error_report(job, BadParameter(f"unknown command {job.command!r}"))
    try:
        return 0, handler(job)
    except _MATH_FAILURES as exc:
        return 1, _error_report(job, exc)
    except OrbitsymError as exc:
        return 2, _error_report(job, exc)


def _error_report(job: JobSpec, exc: Exception) -> dict:
    return {
        "schema": SCHEMA,
        "command": job.command,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }


# ---------------------------------------------------------------------------
# rendering and argument parsing


def render_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitsym",
        description="Exact symmetry groups of finite group orbits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, char=False, rep=False, mode=False, trials=False, bound=False):
        p.add_argument("--group", required=True, help="group spec, e.g. cyclic(4)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=None, help="search node budget")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if char:
            p.add_argument("--char", default=None, help=f"character: {_NAME_HELP}")
        if rep:
            p.add_argument("--rep", default=None, help="representation JSON file")
        if mode:
            p.add_argument(
                "--mode", required=True, choices=("euclidean", "affine", "rational")
            )
        if trials:
            p.add_argument("--trials", type=int, default=3)
        if bound:
            p.add_argument("--bound", type=int, default=99, help="sampling box size")

    common(sub.add_parser("group", help="inspect a catalog group"))
    common(sub.add_parser("chartable", help="exact character table"))
    common(sub.add_parser("gensym", help="generic symmetry group of a character"), char=True)
    common(sub.add_parser("classify", help="realizability verdicts"), mode=True)
    common(
        sub.add_parser("oracle", help="brute-force orbit symmetry group"),
        char=True,
        rep=True,
        bound=True,
    )
    common(
        sub.add_parser("verify", help="theory against the oracle"),
        char=True,
        rep=True,
        trials=True,
    )
    common(sub.add_parser("explore", help="search for a generically closed character"))
    return parser


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    inputs = {"group": ns.group}
    for key in ("char", "rep", "mode"):
        if hasattr(ns, key) and getattr(ns, key) is not None:
            inputs[key] = getattr(ns, key)
    budgets = {}
    if ns.budget is not None:
        budgets["budget"] = ns.budget
    if getattr(ns, "trials", None) is not None:
        budgets["trials"] = ns.trials
    if getattr(ns, "bound", None) is not None:
        budgets["bound"] = ns.bound
    return JobSpec(
        command=ns.command,
        inputs=inputs,
        seed=ns.seed,
        budgets=budgets,
        output=ns.out,
    )


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    job = job_from_args(ns)
    code, report = run(job)
    text = render_report(report, ns.format)
    if job.output:
        Path(job.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
