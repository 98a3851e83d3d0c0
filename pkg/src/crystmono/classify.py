"""Diagonal symmetries of the unimodal cubic-point functions.

A symmetry case is a function germ given by exponent triples together
with a diagonal coordinate action (three roots of unity).  Everything
here is character arithmetic: the common unit a symmetry multiplies the
function by, the induced character on the monodromy kernel line, the
sub-basis of the local algebra fixed up to that unit, and the count of
basis classes sitting in a prescribed character eigenspace.

All characters live in one cyclotomic field large enough to hold cube,
fourth, eighth and ninth roots of unity at once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from math import lcm

from .cyclo import CycloField, CycloNum, parse_value
from .monodromy import CheckResult

CHARACTER_FIELD = CycloField(72)

Triple = tuple[int, int, int]


class ClassifyError(ValueError):
    """Invalid classification input."""


class NotEquivariant(ClassifyError):
    """The symmetry does not multiply the function by one common unit."""


@dataclass(frozen=True)
class SymmetryCase:
    """A function germ plus a diagonal symmetry, with its local-algebra basis.

    The basis is stored as classes of monomials that represent the same
    residue up to a unit, so membership statements are class statements.
    """

    label: str
    terms: tuple[Triple, ...]
    kappa: tuple[CycloNum, CycloNum, CycloNum]
    basis: tuple[tuple[Triple, ...], ...] = ()


def character(kappa, term: Triple) -> CycloNum:
    """The unit by which the diagonal action scales one monomial."""
    kx, ky, kz = kappa
    return kx ** term[0] * ky ** term[1] * kz ** term[2]


def equivariance_factor(case: SymmetryCase) -> CycloNum:
    """The single unit multiplying every term of the function, or a failure."""
    if not case.terms:
        raise ClassifyError(f"{case.label}: no terms")
    vals = [character(case.kappa, t) for t in case.terms]
    for t, v in zip(case.terms[1:], vals[1:]):
        if v != vals[0]:
            raise NotEquivariant(
                f"{case.label}: term {t} scales by {v}, first term by {vals[0]}"
            )
    return vals[0]


def symmetry_order(case: SymmetryCase) -> int:
    orders = []
    for k in case.kappa:
        o = k.multiplicative_order(72)
        if o is None:
            raise ClassifyError(f"{case.label}: coordinate factor is not a root of unity")
        orders.append(o)
    return lcm(*orders)


def class_character(case: SymmetryCase, cls) -> CycloNum:
    """Common character of a basis class; members must agree under this symmetry."""
    vals = [character(case.kappa, t) for t in cls]
    for v in vals[1:]:
        if v != vals[0]:
            raise ClassifyError(f"{case.label}: basis class {cls} mixes characters")
    return vals[0]


def kernel_character(case: SymmetryCase) -> CycloNum:
    """Character of the symmetry on the distinguished monodromy kernel line."""
    kx, ky, kz = case.kappa
    return kx * ky * kz * equivariance_factor(case).inverse()


def kernel_characters(case: SymmetryCase):
    """The conjugate character pair cutting the kernel eigenspaces, if any.

    Only characters of order 3, 4 or 6 produce a pair of conjugate
    eigenspaces; a real character (order 1 or 2) returns None.
    """
    chi = kernel_character(case)
    if chi.multiplicative_order(72) not in (3, 4, 6):
        return None
    return chi, chi.conjugate()


def versal_classes(case: SymmetryCase) -> tuple:
    """Basis classes whose character equals the equivariance factor."""
    if not case.basis:
        raise ClassifyError(f"{case.label}: no local basis attached")
    c = equivariance_factor(case)
    return tuple(cls for cls in case.basis if class_character(case, cls) == c)


def character_multiplicity(case: SymmetryCase, chi: CycloNum) -> int:
    """Number of basis classes in the given character eigenspace.

    Classes are weighted by the kernel character, so the versal classes
    are exactly the multiplicity of the kernel character itself.
    """
    if not case.basis:
        raise ClassifyError(f"{case.label}: no local basis attached")
    base = kernel_character(case)
    return sum(1 for cls in case.basis if class_character(case, cls) * base == chi)


def is_smoothable(case: SymmetryCase) -> bool:
    """Whether the equivariant deformation admits a smoothing direction."""
    c = equivariance_factor(case)
    return c == CHARACTER_FIELD.one or c in case.kappa


@dataclass(frozen=True)
class TableRow:
    notation: str
    function_id: str
    case: SymmetryCase
    declared_order: int
    declared_versal: tuple[Triple, ...]
    declared_kernel: tuple[CycloNum, CycloNum]
    declared_smoothable: bool
    group: str | None
    diagram: str | None


@dataclass(frozen=True)
class ProjRow:
    id: int
    case: SymmetryCase
    modulus_term: Triple | None
    condition: str | None
    declared_splits: bool


_TABLE: tuple[TableRow, ...] | None = None
_PROJ: tuple[ProjRow, ...] | None = None


def _parse_kappa(values) -> tuple[CycloNum, CycloNum, CycloNum]:
    return tuple(parse_value(s, CHARACTER_FIELD) for s in values)


def _load_table() -> dict:
    return json.loads(resources.files(__package__).joinpath("data/table1.json").read_text())


def table_rows() -> tuple[TableRow, ...]:
    """All classified symmetry cases, in table order."""
    global _TABLE
    if _TABLE is None:
        raw = _load_table()
        bases = {
            fid: tuple(tuple(tuple(t) for t in cls) for cls in classes)
            for fid, classes in raw["local_bases"].items()
        }
        functions = {
            fid: tuple(tuple(t) for t in entry["terms"]) for fid, entry in raw["functions"].items()
        }
        rows = []
        for r in raw["rows"]:
            case = SymmetryCase(
                label=r["notation"],
                terms=functions[r["f"]],
                kappa=_parse_kappa(r["kappa"]),
                basis=bases[r["f"]],
            )
            rows.append(
                TableRow(
                    notation=r["notation"],
                    function_id=r["f"],
                    case=case,
                    declared_order=r["order"],
                    declared_versal=tuple(tuple(t) for t in r["versal"]),
                    declared_kernel=tuple(parse_value(s, CHARACTER_FIELD) for s in r["kernel"]),
                    declared_smoothable=r["smoothable"],
                    group=r["group"],
                    diagram=r["diagram"],
                )
            )
        _TABLE = tuple(rows)
    return _TABLE


def proj_rows() -> tuple[ProjRow, ...]:
    """The seven projective symmetry families."""
    global _PROJ
    if _PROJ is None:
        raw = json.loads(resources.files(__package__).joinpath("data/pproj.json").read_text())
        table = _load_table()
        bases = {
            fid: tuple(tuple(tuple(t) for t in cls) for cls in classes)
            for fid, classes in table["local_bases"].items()
        }
        rows = []
        for r in raw["rows"]:
            terms = [tuple(t) for t in r["f_terms"]]
            modulus = tuple(r["modulus_term"]) if r["modulus_term"] else None
            if modulus is not None:
                terms.append(modulus)
            case = SymmetryCase(
                label=f"projective row {r['id']}",
                terms=tuple(terms),
                kappa=_parse_kappa(r["kappa"]),
                basis=bases[r["basis"]] if r["basis"] else (),
            )
            rows.append(
                ProjRow(
                    id=r["id"],
                    case=case,
                    modulus_term=modulus,
                    condition=r["condition"],
                    declared_splits=r["splits_kernel"],
                )
            )
        _PROJ = tuple(rows)
    return _PROJ


def _class_of(case: SymmetryCase, triple: Triple):
    for cls in case.basis:
        if triple in cls:
            return cls
    raise ClassifyError(f"{case.label}: {triple} is not in the local basis")


def verify_table_row(row: TableRow) -> tuple[CheckResult, ...]:
    """Check one table row's order, versal set, kernel pair and smoothability."""
    case = row.case
    checks = []
    try:
        factor = equivariance_factor(case)
        checks.append(
            CheckResult(
                "equivariance",
                "the symmetry multiplies every term of the function by one unit",
                "pass",
                f"factor of {row.notation} computed",
            )
        )
    except NotEquivariant as e:
        return (
            CheckResult(
                "equivariance",
                "the symmetry multiplies every term of the function by one unit",
                "fail",
                str(e),
            ),
        )

    order = symmetry_order(case)
    checks.append(
        CheckResult(
            "symmetry_order",
            f"the symmetry has order {row.declared_order}",
            "pass" if order == row.declared_order else "fail",
            f"computed {order}",
        )
    )

    got = versal_classes(case)
    want = []
    mismatch = None
    for t in row.declared_versal:
        try:
            want.append(_class_of(case, t))
        except ClassifyError as e:
            mismatch = str(e)
    ok = mismatch is None and set(got) == set(want) and len(want) == len(row.declared_versal)
    checks.append(
        CheckResult(
            "versal_monomials",
            "the stable deformation directions are exactly those declared",
            "pass" if ok else "fail",
            mismatch or f"computed {len(got)} classes, declared {len(row.declared_versal)}",
        )
    )

    pair = kernel_characters(case)
    ok = pair is not None and set(pair) == set(row.declared_kernel)
    checks.append(
        CheckResult(
            "kernel_characters",
            "the kernel eigenspace characters form the declared conjugate pair",
            "pass" if ok else "fail",
            "computed pair compared as a set",
        )
    )

    smoothable = is_smoothable(case)
    checks.append(
        CheckResult(
            "smoothability",
            f"the case is {'smoothable' if row.declared_smoothable else 'not smoothable'}",
            "pass" if smoothable == row.declared_smoothable else "fail",
            f"factor {'is' if smoothable else 'is not'} realised by a coordinate",
        )
    )
    return tuple(checks)


def verify_proj_row(row: ProjRow) -> tuple[CheckResult, ...]:
    """Check one projective family: equivariance and whether the kernel splits."""
    case = row.case
    try:
        equivariance_factor(case)
        first = CheckResult(
            "equivariance",
            "every term, modulus included, transforms by one common unit",
            "pass",
            f"{len(case.terms)} terms checked",
        )
    except NotEquivariant as e:
        return (
            CheckResult(
                "equivariance",
                "every term, modulus included, transforms by one common unit",
                "fail",
                str(e),
            ),
        )
    split = kernel_characters(case) is not None
    second = CheckResult(
        "kernel_split",
        f"the kernel {'splits into a conjugate eigenspace pair' if row.declared_splits else 'does not split'}",
        "pass" if split == row.declared_splits else "fail",
        f"kernel character order {kernel_character(case).multiplicative_order(72)}",
    )
    return (first, second)
