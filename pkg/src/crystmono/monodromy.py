"""Vanishing-cycle diagrams and their Picard-Lefschetz operators.

Each diagram bundles the hermitian pairing data of a distinguished set of
cycles together with the reflection eigenvalue attached to every cycle.
Loading a diagram reconciles any declared sign/unit ambiguities against
hard constraints (hermitian, negative semi-definite, corank-1 quotient
with the stated kernel vector) and the result is cached, so the same
name always yields the identical object.

Operators act on column vectors in the basis of the first tau cycles;
when a linear relation is declared, the trailing cycle is rewritten in
terms of that basis.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources

from .cyclo import CycloField, CycloNum, in_subring, parse_value
from .linalg import (
    HermitianGram,
    Matrix,
    Vector,
    conj_vector,
    identity,
    is_zero_vector,
    mat_mul,
    mat_vec,
    matrix,
    vec_add,
    vec_scale,
    vector,
)


class DiagramError(ValueError):
    """Structural problem with diagram data or an invalid operation."""


class ReconcileError(DiagramError):
    """No admissible value assignment; message names the violated constraint."""


class OrderBoundError(DiagramError):
    """Matrix power walk exceeded the allowed order bound."""


_RING_FIELD = {"Z[w]": 3, "Z[i]": 4}

# braid word lengths: 2 commute, 3 aba=bab, 4 abab=baba, 6 (ab)^3=(ba)^3
_BRAID_LENGTHS = (2, 3, 4, 6)


@dataclass(frozen=True)
class Cycle:
    id: str
    self_pairing: int
    order: int
    eigenvalue: CycloNum


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    value: CycloNum
    candidates: tuple[str, ...]
    braid: int | None


@dataclass(frozen=True)
class PLOperator:
    """A complex reflection together with the root and eigenvalue that built it."""

    matrix: Matrix
    root: Vector
    eigenvalue: CycloNum


@dataclass(frozen=True)
class CheckResult:
    """One verified claim: a stable id, the claim in plain words, and the outcome."""

    claim_id: str
    claim: str
    verdict: str  # pass | fail | inconclusive
    witness: str


class Diagram:
    """A reconciled cycle diagram bound to one of its two kernel characters."""

    def __init__(
        self,
        name: str,
        ring: str,
        field: CycloField,
        chi_label: str,
        chi: CycloNum,
        kernel_chi_pair: tuple[CycloNum, CycloNum],
        cycles: tuple[Cycle, ...],
        edges: tuple[Edge, ...],
        gram: HermitianGram,
        relation: Vector | None,
        kernel_vector: Vector,
        omitted_root: str,
        expected_group: str | None,
        tau: int,
        classical_order: int,
        resolved_choices: dict[str, str],
        rejected_choices: tuple[tuple[dict[str, str], str], ...],
    ):
        self.name = name
        self.ring = ring
        self.field = field
        self.chi_label = chi_label
        self.chi = chi
        self.kernel_chi_pair = kernel_chi_pair
        self.cycles = cycles
        self.edges = edges
        self.gram = gram
        self.relation = relation
        self.kernel_vector = kernel_vector
        self.omitted_root = omitted_root
        self.expected_group = expected_group
        self.tau = tau
        self.classical_order = classical_order
        self.resolved_choices = resolved_choices
        self.rejected_choices = rejected_choices

    def cycle_index(self, cycle_id: str) -> int:
        for k, c in enumerate(self.cycles):
            if c.id == cycle_id:
                return k
        raise DiagramError(f"{self.name}: no cycle named {cycle_id!r}")

    def conjugated(self) -> "Diagram":
        """The same diagram bound to the conjugate kernel character."""
        other = "conj" if self.chi_label == "primary" else "primary"
        return diagram(self.name, other)

    def __repr__(self) -> str:
        return f"Diagram({self.name!r}, chi={self.chi_label})"


def _load_raw() -> dict:
    text = resources.files(__package__).joinpath("data/diagrams.json").read_text()
    return json.loads(text)


_RAW_CACHE: dict | None = None
_DIAGRAM_CACHE: dict[tuple[str, str], Diagram] = {}


def _raw_diagrams() -> dict:
    global _RAW_CACHE
    if _RAW_CACHE is None:
        data = _load_raw()
        _RAW_CACHE = {d["name"]: d for d in data["diagrams"]}
    return _RAW_CACHE


def diagram_names() -> tuple[str, ...]:
    return tuple(_raw_diagrams())


def builtin_diagrams(chi: str = "primary") -> tuple[Diagram, ...]:
    return tuple(diagram(name, chi) for name in diagram_names())


def diagram(name: str, chi: str = "primary") -> Diagram:
    """Load, reconcile and cache one diagram for the chosen kernel character."""
    if chi not in ("primary", "conj"):
        raise DiagramError(f"kernel character must be 'primary' or 'conj', got {chi!r}")
    key = (name, chi)
    if key not in _DIAGRAM_CACHE:
        raw = _raw_diagrams().get(name)
        if raw is None:
            raise DiagramError(f"unknown diagram: {name}")
        _DIAGRAM_CACHE[key] = _build(raw, chi)
    return _DIAGRAM_CACHE[key]


def _build(raw: dict, chi_label: str) -> Diagram:
    field = CycloField(_RING_FIELD[raw["ring"]])
    chi_pair = tuple(parse_value(s, field) for s in raw["kernel_chi"])
    if chi_pair[1] != chi_pair[0].conjugate():
        raise DiagramError(f"{raw['name']}: kernel characters are not conjugate")
    if chi_pair[0].multiplicative_order(12) not in (3, 4, 6):
        raise DiagramError(f"{raw['name']}: kernel character is not an admissible root of unity")
    conj = chi_label == "conj"
    chi = chi_pair[1] if conj else chi_pair[0]

    cycles = []
    for c in raw["cycles"]:
        lam = parse_value(c["lambda"], field, chi=chi)
        cycles.append(Cycle(c["id"], c["self"], c["order"], lam))
    cycles = tuple(cycles)
    index = {c.id: k for k, c in enumerate(cycles)}
    if len(index) != len(cycles):
        raise DiagramError(f"{raw['name']}: duplicate cycle ids")

    tau = raw["tau"]
    relation_raw = raw.get("relation")
    if tau != len(cycles) - (1 if relation_raw else 0):
        raise DiagramError(f"{raw['name']}: tau does not match cycle/relation count")

    edges = []
    for e in raw["edges"]:
        cands = tuple(e.get("ambiguity", [e["value"]]))
        if cands[0] != e["value"]:
            raise DiagramError(f"{raw['name']}: edge value must head its ambiguity list")
        if e["braid"] is not None and e["braid"] not in _BRAID_LENGTHS:
            raise DiagramError(f"{raw['name']}: unsupported braid length {e['braid']}")
        edges.append((e["from"], e["to"], cands, e["braid"]))

    # conjugate dataset: conjugate every stated value, keep the structure
    def val(text: str) -> CycloNum:
        v = parse_value(text, field, chi=chi)
        return v.conjugate() if conj else v

    kernel_vector = vector(field, [val(s) for s in raw["kernel_vector"]])
    if len(kernel_vector) != tau:
        raise DiagramError(f"{raw['name']}: kernel vector must have tau entries")
    relation = None
    if relation_raw:
        relation = vector(field, [val(s) for s in relation_raw])

    gram, choices, rejected = _reconcile(
        raw["name"], field, raw["ring"], cycles, edges, relation, kernel_vector, tau, val
    )

    omitted = raw["omitted_root"]
    if omitted not in index or index[omitted] >= tau:
        raise DiagramError(f"{raw['name']}: omitted root must be one of the first tau cycles")

    return Diagram(
        name=raw["name"],
        ring=raw["ring"],
        field=field,
        chi_label=chi_label,
        chi=chi,
        kernel_chi_pair=chi_pair,
        cycles=cycles,
        edges=tuple(
            Edge(src, dst, gram.gram[index[src]][index[dst]], cands, braid)
            for src, dst, cands, braid in edges
        ),
        gram=gram,
        relation=relation,
        kernel_vector=kernel_vector,
        omitted_root=omitted,
        expected_group=raw.get("expected_group"),
        tau=tau,
        classical_order=raw["classical_order"],
        resolved_choices=choices,
        rejected_choices=rejected,
    )


def _reconcile(name, field, ring, cycles, edges, relation, kernel_vector, tau, val):
    """Pick edge values deterministically against the hard constraints.

    Candidate assignments are enumerated in declared order (edge by edge,
    candidate lists left to right); the first assignment satisfying every
    constraint wins.  Rejected assignments are kept with the name of the
    first constraint they broke, so ambiguous choices stay auditable.
    """
    index = {c.id: k for k, c in enumerate(cycles)}
    for c in cycles:
        if c.eigenvalue.multiplicative_order(24) != c.order:
            raise ReconcileError(f"{name}: eigenvalue_order violated for cycle {c.id}")
        if c.eigenvalue == field.one:
            raise ReconcileError(f"{name}: cycle {c.id} has eigenvalue 1")

    candidate_values = []
    for src, dst, cands, _ in edges:
        if src not in index or dst not in index:
            raise DiagramError(f"{name}: edge endpoint missing")
        vals = tuple(val(s) for s in cands)
        norms = {v * v.conjugate() for v in vals}
        if len(norms) != 1:
            raise ReconcileError(f"{name}: magnitude violated on edge {src}->{dst}")
        for v in vals:
            if not in_subring(v, ring):
                raise ReconcileError(f"{name}: ring violated on edge {src}->{dst}")
        candidate_values.append(vals)

    zero = field.zero
    rejected: list[tuple[dict[str, str], str]] = []
    winner = None

    for picks in itertools.product(*(range(len(v)) for v in candidate_values)):
        entries = [
            [field.from_rational(c.self_pairing) if r == s else zero for s in range(len(cycles))]
            for r, c in enumerate(cycles)
        ]
        for (src, dst, _, _), vals, pick in zip(edges, candidate_values, picks):
            r, s = index[src], index[dst]
            if r == s or not entries[r][s].is_zero():
                raise DiagramError(f"{name}: conflicting edge {src}->{dst}")
            entries[r][s] = vals[pick]
            entries[s][r] = vals[pick].conjugate()
        gram = HermitianGram(matrix(field, entries))

        label = {
            f"{src}->{dst}": cands[pick]
            for (src, dst, cands, _), pick in zip(edges, picks)
        }
        failed = _check_gram(gram, relation, kernel_vector, tau)
        if failed is None:
            if winner is None:
                winner = (gram, label)
        else:
            rejected.append((label, failed))

    if winner is None:
        detail = "; ".join(f"{lab}: {why}" for lab, why in rejected) or "no candidates"
        raise ReconcileError(f"{name}: no admissible assignment ({detail})")

    gram, label = winner
    choices = {
        key: label[key]
        for (src, dst, cands, _) in edges
        if len(cands) > 1
        for key in (f"{src}->{dst}",)
    }
    return gram, choices, tuple(rejected)


def _check_gram(gram: HermitianGram, relation, kernel_vector, tau) -> str | None:
    """Return the name of the first violated constraint, or None if all hold."""
    if not gram.is_negative_semidefinite():
        return "negative_semidefinite"
    if relation is not None:
        field = gram.field
        for j in range(gram.n):
            s = field.zero
            for k in range(gram.n):
                s = s + relation[k] * gram.gram[k][j]
            if not s.is_zero():
                return "relation_in_radical"
    q = _quotient_gram(gram, tau)
    if q.corank != 1:
        return "quotient_corank"
    for j in range(tau):
        s = gram.field.zero
        for k in range(tau):
            s = s + kernel_vector[k] * q.gram[k][j]
        if not s.is_zero():
            return "kernel_vector"
    return None


def _quotient_gram(gram: HermitianGram, tau: int) -> HermitianGram:
    sub = [row[:tau] for row in gram.gram[:tau]]
    return HermitianGram(matrix(gram.field, sub))


@dataclass(frozen=True)
class Quotient:
    """The span of the first tau cycles with every cycle written in that basis."""

    field: CycloField
    gram: HermitianGram
    roots: tuple[Vector, ...]
    eigenvalues: tuple[CycloNum, ...]
    labels: tuple[str, ...]
    kernel: Vector
    omitted_index: int


def quotient_basis(d: Diagram) -> Quotient:
    """Rewrite all cycles in the basis of the first tau cycles.

    With no relation this is the identity rewrite.  A declared relation
    must lie in the radical of the full form and must have an invertible
    coefficient on the trailing cycle, which is then eliminated.
    """
    field = d.field
    tau = d.tau
    qgram = _quotient_gram(d.gram, tau)
    basis = [
        vector(field, [field.one if k == j else field.zero for k in range(tau)])
        for j in range(tau)
    ]
    roots = list(basis)
    if d.relation is not None:
        last = d.relation[len(d.cycles) - 1]
        if last.is_zero():
            raise DiagramError(f"{d.name}: relation does not eliminate the last cycle")
        failed = _check_gram(d.gram, d.relation, d.kernel_vector, tau)
        if failed == "relation_in_radical":
            raise DiagramError(f"{d.name}: relation not in the radical of the form")
        scale = -last.inverse()
        extra = vector(field, [field.zero] * tau)
        for k in range(tau):
            extra = vec_add(extra, vec_scale(d.relation[k] * scale, basis[k]))
        roots.append(extra)
    return Quotient(
        field=field,
        gram=qgram,
        roots=tuple(roots),
        eigenvalues=tuple(c.eigenvalue for c in d.cycles),
        labels=tuple(c.id for c in d.cycles),
        kernel=d.kernel_vector,
        omitted_index=d.cycle_index(d.omitted_root),
    )


def pl_operator(gram: HermitianGram, root: Vector, eigenvalue: CycloNum) -> PLOperator:
    """The complex reflection c -> c - (1-lambda) <c,e> e / <e,e>."""
    field = gram.field
    q = gram.eval(root, root)
    if q.is_zero():
        raise DiagramError("isotropic root has no reflection")
    if eigenvalue == field.one:
        raise DiagramError("eigenvalue 1 does not define a reflection")
    gbar = mat_vec(gram.gram, conj_vector(root))
    coef = (field.one - eigenvalue) * q.inverse()
    n = len(root)
    rows = []
    for k in range(n):
        row = []
        for j in range(n):
            delta = field.one if k == j else field.zero
            row.append(delta - coef * root[k] * gbar[j])
        rows.append(row)
    return PLOperator(matrix(field, rows), root, eigenvalue)


def diagram_operators(d: Diagram) -> tuple[PLOperator, ...]:
    """One reflection per cycle, acting on the quotient basis."""
    q = quotient_basis(d)
    return tuple(
        pl_operator(q.gram, root, lam) for root, lam in zip(q.roots, q.eigenvalues)
    )


def operator_order(m: Matrix, bound: int = 24) -> int:
    n = len(m)
    field = m[0][0].field
    ident = identity(field, n)
    p = m
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = mat_mul(p, m)
    raise OrderBoundError(f"no order found up to {bound}")


def check_braid(a: Matrix, b: Matrix, length: int) -> bool:
    """Alternating word identity of the given length: 2 means commuting."""
    if length not in _BRAID_LENGTHS:
        raise DiagramError(f"unsupported braid length {length}")
    left, right = a, b
    wl, wr = a, b
    for _ in range(length - 1):
        left, right = right, left
        wl = mat_mul(wl, left)
        wr = mat_mul(wr, right)
    return wl == wr


def classical_monodromy(d: Diagram) -> Matrix:
    """Product of the tau vertex reflections, first vertex applied first."""
    ops = diagram_operators(d)[: d.tau]
    q = quotient_basis(d)
    p = identity(d.field, len(q.kernel))
    for op in ops:
        p = mat_mul(op.matrix, p)
    return p


def _order_or_none(m: Matrix) -> int | None:
    """Like operator_order, but bad data reports as a mismatch instead of raising."""
    try:
        return operator_order(m)
    except OrderBoundError:
        return None


def verify_diagram(d: Diagram) -> tuple[CheckResult, ...]:
    """Intrinsic checks of one reconciled diagram: form, reflections, braids, monodromy."""
    checks = []
    q = quotient_basis(d)

    semidef = d.gram.is_negative_semidefinite()
    corank = q.gram.corank
    kernel_ok = is_zero_vector(mat_vec(q.gram.gram, conj_vector(q.kernel)))
    ok = semidef and corank == 1 and kernel_ok
    checks.append(
        CheckResult(
            "gram_form",
            "the pairing matrix is negative semidefinite with a one-dimensional radical "
            "spanned by the stated kernel vector",
            "pass" if ok else "fail",
            f"semidefinite {semidef}, corank {corank}, kernel annihilated {kernel_ok}",
        )
    )

    ops = diagram_operators(d)
    bad = []
    for op, cyc in zip(ops, d.cycles):
        if not q.gram.is_preserved_by(op.matrix):
            bad.append(f"{cyc.id}: form")
        elif _order_or_none(op.matrix) != cyc.order:
            bad.append(f"{cyc.id}: order")
        elif mat_vec(op.matrix, q.kernel) != q.kernel:
            bad.append(f"{cyc.id}: kernel moved")
    checks.append(
        CheckResult(
            "reflections",
            "every cycle reflection preserves the form, fixes the kernel vector, "
            "and has its declared order",
            "fail" if bad else "pass",
            "; ".join(bad) if bad else f"{len(ops)} reflections checked",
        )
    )

    bad = []
    for e in d.edges:
        if e.braid is None:
            continue
        a = ops[d.cycle_index(e.src)].matrix
        b = ops[d.cycle_index(e.dst)].matrix
        if not check_braid(a, b, e.braid):
            bad.append(f"{e.src}~{e.dst} at {e.braid}")
    for i in range(len(d.cycles)):
        for j in range(i + 1, len(d.cycles)):
            if d.gram.gram[i][j].is_zero() and not check_braid(ops[i].matrix, ops[j].matrix, 2):
                bad.append(f"{d.cycles[i].id}~{d.cycles[j].id} at 2")
    checks.append(
        CheckResult(
            "braids",
            "declared braid lengths hold and unpaired reflections commute",
            "fail" if bad else "pass",
            "; ".join(bad) if bad else "all alternating words compared",
        )
    )

    order = _order_or_none(classical_monodromy(d))
    checks.append(
        CheckResult(
            "classical_monodromy",
            f"the product of the vertex reflections has order {d.classical_order}",
            "pass" if order == d.classical_order else "fail",
            f"computed order {order}" if order else "no power reached the identity within the bound",
        )
    )

    if d.name == "P8_Z3":
        held = extra_relation_P8Z3(d)
        checks.append(
            CheckResult(
                "extra_relation",
                "the additional length-eight relation between the three reflections holds",
                "pass" if held else "fail",
                "squared four-letter words compared",
            )
        )
    return tuple(checks)


def extra_relation_P8Z3(d: Diagram) -> bool:
    """The length-8 relation specific to the order-3 invariant cubic case."""
    if len(d.cycles) != 3 or d.relation is not None:
        raise DiagramError(f"{d.name}: extra relation needs three independent cycles")
    h0, h1, h2 = (op.matrix for op in diagram_operators(d))

    def word(ms):
        p = ms[0]
        for m in ms[1:]:
            p = mat_mul(p, m)
        return p

    w1 = word([h1, h0, h2, h0])
    w2 = word([h0, h2, h0, h1])
    return mat_mul(w1, w1) == mat_mul(w2, w2)


def fold(d: Diagram, swap: tuple[str, str], sign_variant: int | None = None) -> Diagram:
    """Identify two cycles of a diagram, merging them into their (anti)sum.

    The merged cycle replaces the first of the pair; the second is removed.
    With sign_variant None both signs are tried in the order +1, -1 and the
    first variant passing the corank-1 constraint is returned; if a sign is
    given it must pass on its own.
    """
    a_id, b_id = swap
    if a_id == b_id:
        raise DiagramError("fold requires two distinct cycles")
    ia, ib = d.cycle_index(a_id), d.cycle_index(b_id)
    if d.relation is not None:
        raise DiagramError(f"{d.name}: folding a diagram with a relation is not supported")
    ca, cb = d.cycles[ia], d.cycles[ib]
    if ca.eigenvalue != cb.eigenvalue or ca.order != cb.order:
        raise DiagramError(f"{d.name}: folded cycles must share their eigenvalue")

    field = d.field
    n = len(d.cycles)
    variants = (1, -1) if sign_variant is None else (sign_variant,)
    failures = []
    for s in variants:
        if s not in (1, -1):
            raise DiagramError("sign variant must be +1 or -1")
        sgn = field.one if s == 1 else -field.one
        vecs = []
        labels = []
        for k, c in enumerate(d.cycles):
            if k == ib:
                continue
            if k == ia:
                v = [field.zero] * n
                v[ia] = field.one
                v[ib] = sgn
                labels.append(f"{a_id}{'+' if s == 1 else '-'}{b_id}")
            else:
                v = [field.one if j == k else field.zero for j in range(n)]
                labels.append(c.id)
            vecs.append(vector(field, v))
        entries = [[d.gram.eval(u, v) for v in vecs] for u in vecs]
        gram = HermitianGram(matrix(field, entries))
        if not gram.is_negative_semidefinite():
            failures.append((s, "negative_semidefinite"))
            continue
        if gram.corank != 1:
            failures.append((s, "quotient_corank"))
            continue
        kernel = gram.kernel()[0]
        lead = next(x for x in kernel if not x.is_zero())
        kernel = vec_scale(lead.inverse(), kernel)
        kept = [j for j in range(n) if j != ib]
        cycles = tuple(
            Cycle(
                labels[k],
                int(gram.gram[k][k].rational_value()),
                d.cycles[j].order,
                d.cycles[j].eigenvalue,
            )
            for k, j in enumerate(kept)
        )
        new_edges = tuple(
            Edge(labels[r], labels[c2], gram.gram[r][c2], (), None)
            for r in range(len(vecs))
            for c2 in range(len(vecs))
            if r < c2 and not gram.gram[r][c2].is_zero()
        )
        return Diagram(
            name=f"{d.name}_folded",
            ring=d.ring,
            field=field,
            chi_label=d.chi_label,
            chi=d.chi,
            kernel_chi_pair=d.kernel_chi_pair,
            cycles=cycles,
            edges=new_edges,
            gram=gram,
            relation=None,
            kernel_vector=kernel,
            omitted_root=d.omitted_root if d.omitted_root != b_id else labels[0],
            expected_group=None,
            tau=len(vecs),
            classical_order=d.classical_order,
            resolved_choices={"fold_sign": "+1" if s == 1 else "-1"},
            rejected_choices=tuple((({"fold_sign": str(fs)}), why) for fs, why in failures),
        )
    detail = "; ".join(f"sign {fs:+d}: {why}" for fs, why in failures)
    raise ReconcileError(f"{d.name}: fold failed ({detail})")
