import re
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    StrictInt,
    StrictStr,
    ValidationError,
    ValidationInfo,
    field_validator,
)
from pydantic_core import PydanticCustomError

from app.config import SCHEMA_VERSION

RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")

KINDS = ("coisotropic", "symplectic_orbit", "action4")

# arm -> record kind it wraps
ARM_KINDS = {"lagrangian": "coisotropic", "symplectic": "symplectic_orbit"}

# pydantic error types reported in our own words
MESSAGES = {
    "missing":         "missing required field",
    "extra_forbidden": "unknown field",
}


def _rational(value: Any) -> Any:
    if not isinstance(value, str) or not RATIONAL_PATTERN.match(value):
        raise PydanticCustomError(
            "rational", 'expected a rational string like "p/q", got {value}', {"value": repr(value)}
        )
    if "/" in value and int(value.split("/")[1]) == 0:
        raise PydanticCustomError("rational", "zero denominator")
    return value


Rational = Annotated[str, BeforeValidator(_rational)]
Rows = List[List[Rational]]


def _check_shape(rows: List[List[Any]], width: Optional[int], count: Optional[int] = None):
    if count is not None and len(rows) != count:
        raise PydanticCustomError(
            "shape", "expected {expected} rows, got {actual}", {"expected": count, "actual": len(rows)}
        )
    for i, row in enumerate(rows):
        if width is not None and len(row) != width:
            raise PydanticCustomError(
                "shape", "row {row} has {actual} entries, expected {expected}",
                {"row": i, "actual": len(row), "expected": width},
            )


def _torus_dim(info: ValidationInfo) -> Optional[int]:
    return info.data.get("torus_dim")


# --- Record models ---

class _Versioned(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # required at the top level only; see validate_record
    schema_version: Optional[StrictInt] = Field(default=None, alias="schema")

    @field_validator("schema_version")
    @classmethod
    def _known_version(cls, value):
        if value is not None and value != SCHEMA_VERSION:
            raise PydanticCustomError(
                "schema_version", "unsupported schema version {version}, expected {expected}",
                {"version": value, "expected": SCHEMA_VERSION},
            )
        return value


class _TorusRecord(_Versioned):
    name:      StrictStr = ""
    torus_dim: Annotated[StrictInt, Field(gt=0)]
    omega_t:   Rows

    @field_validator("omega_t")
    @classmethod
    def _square(cls, rows, info: ValidationInfo):
        k = _torus_dim(info)
        if k is not None:
            _check_shape(rows, k, count=k)
        return rows


class ChernEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pair:  List[StrictInt]
    value: List[Rational]

    @field_validator("pair")
    @classmethod
    def _ordered(cls, pair):
        if len(pair) != 2 or not 1 <= pair[0] < pair[1]:
            raise PydanticCustomError(
                "chern_pair", "expected [i, j] with 1 <= i < j, got {pair}", {"pair": repr(pair)}
            )
        return pair


class CoisotropicRecord(_TorusRecord):
    kind:         Literal["coisotropic"]
    t_h:          List[List[StrictInt]]
    delta:        Annotated[Rows, Field(min_length=1)]
    period_basis: Rows
    chern:        List[ChernEntry]
    tau:          Rows

    @field_validator("t_h", "tau")
    @classmethod
    def _k_columns(cls, rows, info: ValidationInfo):
        _check_shape(rows, _torus_dim(info))
        return rows

    @field_validator("delta", "period_basis")
    @classmethod
    def _even_columns(cls, rows):
        _check_shape(rows, len(rows[0]) if rows else None)
        return rows

    @field_validator("chern")
    @classmethod
    def _k_values(cls, entries, info: ValidationInfo):
        k = _torus_dim(info)
        for i, entry in enumerate(entries):
            if k is not None and len(entry.value) != k:
                raise PydanticCustomError(
                    "shape", "entry {entry} has {actual} values, expected {expected}",
                    {"entry": i, "actual": len(entry.value), "expected": k},
                )
        return entries


class SignatureModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    genus:  Annotated[StrictInt, Field(ge=0)]
    orders: List[StrictInt]


class MonodromyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha_beta: Rows
    gamma:      Rows


class SymplecticOrbitRecord(_TorusRecord):
    kind:      Literal["symplectic_orbit"]
    signature: SignatureModel
    area:      Rational
    monodromy: MonodromyModel

    @field_validator("monodromy")
    @classmethod
    def _k_columns(cls, monodromy, info: ValidationInfo):
        k = _torus_dim(info)
        _check_shape(monodromy.alpha_beta, k)
        _check_shape(monodromy.gamma, k)
        return monodromy


class ActionRecord(_Versioned):
    kind:   Literal["action4"]
    arm:    Literal["lagrangian", "symplectic"]
    record: Annotated[Union[CoisotropicRecord, SymplecticOrbitRecord], Field(discriminator="kind")]

    @field_validator("record")
    @classmethod
    def _matches_arm(cls, record, info: ValidationInfo):
        arm = info.data.get("arm")
        if arm is not None and record.kind != ARM_KINDS[arm]:
            raise PydanticCustomError(
                "arm", "the {arm} arm needs a {expected} record", {"arm": arm, "expected": ARM_KINDS[arm]}
            )
        return record


RecordModel = Union[CoisotropicRecord, SymplecticOrbitRecord, ActionRecord]

MODELS = {
    "coisotropic":      CoisotropicRecord,
    "symplectic_orbit": SymplecticOrbitRecord,
    "action4":          ActionRecord,
}


class SchemaViolation(ValueError):
    """
    A record file that does not match the schema; errors are (location, message) pairs.
    """

    def __init__(self, errors: List[Tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(self.messages))

    @property
    def messages(self) -> List[str]:
        return [f"{loc}: {msg}" for loc, msg in self.errors]


def json_location(loc: Tuple[Union[str, int], ...], root: str = "$") -> str:
    """
    A pydantic error location as a JSON path. The union tag pydantic inserts
    after "record" is dropped.
    """
    path = root
    previous = None
    for part in loc:
        if previous == "record" and part in MODELS:
            previous = part
            continue
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
        previous = part
    return path


def _located(exc: ValidationError) -> List[Tuple[str, str]]:
    return [(json_location(e["loc"]), MESSAGES.get(e["type"], e["msg"])) for e in exc.errors()]


def detect_kind(data: Any) -> Optional[str]:
    """
    The record kind named by the top-level "kind" field, or None.
    """
    if isinstance(data, dict) and data.get("kind") in KINDS:
        return data["kind"]
    return None


def validate_record(data: Any) -> RecordModel:
    """
    Validate a decoded record file and return its model. Raises
    SchemaViolation listing every error with its JSON location.
    """
    if not isinstance(data, dict):
        raise SchemaViolation([("$", "expected a JSON object")])
    kind = detect_kind(data)
    if kind is None:
        raise SchemaViolation([("$.kind", f"expected one of {', '.join(KINDS)}, got {data.get('kind')!r}")])

    errors: List[Tuple[str, str]] = []
    model = None
    try:
        model = MODELS[kind].model_validate(data)
    except ValidationError as e:
        errors.extend(_located(e))
    if "schema" not in data:
        errors.append(("$.schema", MESSAGES["missing"]))
    if errors:
        raise SchemaViolation(errors)
    return model

