import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from app.config import SCHEMA_VERSION
from app.exact.linalg import RationalVector
from app.exact.torus import Subtorus, Torus, TorusElement
from app.geometry.orbifold import FuchsianSignature, MonodromyHom
from app.geometry.polytope import normalize
from app.ingestion.schema_detector import (
    CoisotropicRecord,
    RecordModel,
    SchemaViolation,
    SymplecticOrbitRecord,
    validate_record,
)
from app.invariants.classify4 import ActionDescriptor4, LagrangianAction, SymplecticAction
from app.invariants.coisotropic import CoisotropicInvariants
from app.invariants.fixtures import FIXTURES, get_fixture
from app.invariants.symplectic_orbit import SymplecticOrbitInvariants

logger = logging.getLogger(__name__)

Record = Union[CoisotropicInvariants, SymplecticOrbitInvariants, ActionDescriptor4]


class RecordError(ValueError):
    """
    Malformed or schema-violating record input; location is a JSON path.
    violations lists every schema error when there is more than one.
    """

    def __init__(self, message: str, location: str = "$", violations: Optional[List[str]] = None):
        self.location = location
        self.detail = message
        self.violations = violations or []
        super().__init__(f"{location}: {message}")


def parse_rational(value: str) -> Fraction:
    return Fraction(value)


def _vector(values: List[str]) -> RationalVector:
    return tuple(parse_rational(x) for x in values)


def _rows(values: List[List[str]]):
    return tuple(_vector(r) for r in values)


# --- Parsing ---

def _parse_coisotropic(model: CoisotropicRecord, loc: str) -> CoisotropicInvariants:
    torus = Torus(model.torus_dim)
    try:
        t_h = Subtorus.spanned_by(torus, model.t_h)
    except ValueError as e:
        raise RecordError(str(e), f"{loc}.t_h")
    try:
        delta = normalize(_rows(model.delta))
    except ValueError as e:
        raise RecordError(str(e), f"{loc}.delta")

    chern = {}
    for i, entry in enumerate(model.chern):
        pair = (entry.pair[0] - 1, entry.pair[1] - 1)
        if pair in chern:
            raise RecordError(f"duplicate Chern value for pair {entry.pair}", f"{loc}.chern[{i}]")
        chern[pair] = _vector(entry.value)

    return CoisotropicInvariants(
        torus=torus,
        omega_t=_rows(model.omega_t),
        t_h=t_h,
        delta=delta,
        period_basis=_rows(model.period_basis),
        chern=chern,
        tau_basis=tuple(TorusElement(v) for v in _rows(model.tau)),
        name=model.name,
    )


def _parse_symplectic_orbit(model: SymplecticOrbitRecord, loc: str) -> SymplecticOrbitInvariants:
    torus = Torus(model.torus_dim)
    try:
        sig = FuchsianSignature(model.signature.genus, tuple(model.signature.orders))
    except ValueError as e:
        raise RecordError(str(e), f"{loc}.signature")

    return SymplecticOrbitInvariants(
        torus=torus,
        omega_t=_rows(model.omega_t),
        signature=sig,
        area=parse_rational(model.area),
        monodromy=MonodromyHom(
            sig, torus,
            tuple(TorusElement(v) for v in _rows(model.monodromy.alpha_beta)),
            tuple(TorusElement(v) for v in _rows(model.monodromy.gamma)),
        ),
        name=model.name,
    )


def _build(model: RecordModel, loc: str) -> Record:
    if isinstance(model, CoisotropicRecord):
        return _parse_coisotropic(model, loc)
    if isinstance(model, SymplecticOrbitRecord):
        return _parse_symplectic_orbit(model, loc)

    inner = _build(model.record, f"{loc}.record")
    if model.arm == "lagrangian":
        return LagrangianAction(inner)
    return SymplecticAction(inner)


def parse_record(data: Any) -> Record:
    """
    Build the domain record from decoded JSON. Raises RecordError with the
    location of the first schema violation.
    """
    try:
        model = validate_record(data)
    except SchemaViolation as e:
        where, message = e.errors[0]
        raise RecordError(message, where, e.messages if len(e.errors) > 1 else None)
    return _build(model, "$")


def load_record(path: Union[str, Path]) -> Record:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise RecordError(f"cannot read {path}: {e.strerror}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RecordError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")
    logger.debug("loaded %s record from %s", data.get("kind") if isinstance(data, dict) else None, path)
    return parse_record(data)


def resolve_record(source: str) -> Record:
    """
    A built-in fixture name or a path to a record file.
    """
    if source in FIXTURES:
        return get_fixture(source)
    if not Path(source).exists():
        raise RecordError(f"'{source}' is neither a fixture ({', '.join(FIXTURES)}) nor a file")
    return load_record(source)


# --- Serialization ---

def _q(x: Fraction) -> str:
    return str(x)


def _q_rows(rows) -> List[List[str]]:
    return [[_q(x) for x in r] for r in rows]


def serialize_record(record: Record, nested: bool = False) -> Dict:
    """
    Record to its JSON form, fields in schema order.
    """
    head = {} if nested else {"schema": SCHEMA_VERSION}

    if isinstance(record, (LagrangianAction, SymplecticAction)):
        arm = "lagrangian" if isinstance(record, LagrangianAction) else "symplectic"
        return {**head, "kind": "action4", "arm": arm,
                "record": serialize_record(record.invariants, nested=True)}

    if isinstance(record, CoisotropicInvariants):
        body = {
            "kind":         "coisotropic",
            "name":         record.name,
            "torus_dim":    record.torus.dim,
            "omega_t":      _q_rows(record.omega_t),
            "t_h":          [list(r) for r in record.t_h.basis()],
            "delta":        _q_rows(record.delta.vertices),
            "period_basis": _q_rows(record.period_basis),
            "chern":        [{"pair": [i + 1, j + 1], "value": [_q(x) for x in v]}
                             for (i, j), v in sorted(record.chern.items())],
            "tau":          [t.to_strings() for t in record.tau_basis],
        }
        return {**head, **body}

    if isinstance(record, SymplecticOrbitInvariants):
        body = {
            "kind":      "symplectic_orbit",
            "name":      record.name,
            "torus_dim": record.torus.dim,
            "omega_t":   _q_rows(record.omega_t),
            "signature": {"genus": record.signature.genus, "orders": list(record.signature.orders)},
            "area":      _q(record.area),
            "monodromy": {
                "alpha_beta": [t.to_strings() for t in record.monodromy.alpha_beta],
                "gamma":      [t.to_strings() for t in record.monodromy.gamma],
            },
        }
        return {**head, **body}

    raise TypeError(f"Cannot serialize {type(record).__name__}.")


def record_kind(record: Record) -> Optional[str]:
    if isinstance(record, CoisotropicInvariants):
        return "coisotropic"
    if isinstance(record, SymplecticOrbitInvariants):
        return "symplectic_orbit"
    if isinstance(record, (LagrangianAction, SymplecticAction)):
        return "action4"
    return None
