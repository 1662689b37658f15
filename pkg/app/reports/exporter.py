import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd

from app.config import SCHEMA_VERSION
from app.exact.linalg import AbelianInvariants
from app.geometry.orbifold import FuchsianSignature
from app.invariants.classify4 import FourCase, FreeLagrangian, MixedS2T2, OrbifoldBundle, Toric
from app.invariants.coisotropic import ModelDescriptor
from app.invariants.symplectic_orbit import OrbifoldBundleDescriptor
from app.invariants.verdict import EquivalenceVerdict, VerdictTag


def render(report: Dict) -> str:
    """
    Reports keep insertion order, so identical runs print identical bytes.
    """
    return json.dumps(report, indent=2, ensure_ascii=False)


def _q_rows(rows) -> List[List[str]]:
    return [[str(x) for x in r] for r in rows]


def _chern(chern: Dict) -> List[Dict]:
    return [{"pair": [i + 1, j + 1], "value": [str(x) for x in v]} for (i, j), v in sorted(chern.items())]


# --- Verdicts ---

def verdict_report(verdict: EquivalenceVerdict) -> Dict:
    report = {"schema": SCHEMA_VERSION, "verdict": verdict.tag.value}
    if verdict.tag is VerdictTag.EQUIVALENT and verdict.witness is not None:
        report["witness"] = verdict.witness.to_lists()
    if verdict.separator is not None:
        report["separator"] = verdict.separator
    if verdict.detail:
        report["detail"] = verdict.detail
    return report


def validation_report(kind: str, name: str, violations: List[str], warnings: Optional[List[str]] = None) -> Dict:
    report = {
        "schema":     SCHEMA_VERSION,
        "kind":       kind,
        "name":       name,
        "verdict":    "valid" if not violations else "invalid",
        "violations": list(violations),
    }
    if warnings:
        report["warnings"] = list(warnings)
    return report


def error_report(message: str, location: Optional[str] = None, violations: Optional[List[str]] = None) -> Dict:
    report = {"schema": SCHEMA_VERSION, "error": message}
    if location is not None:
        report["location"] = location
    if violations:
        report["violations"] = list(violations)
    return report


# --- Classification and models ---

def classification_report(name: str, case: FourCase) -> Dict:
    report = {"schema": SCHEMA_VERSION, "name": name, "case": case.tag}

    if isinstance(case, Toric):
        report["delta"] = _q_rows(case.delta.vertices)
    elif isinstance(case, MixedS2T2):
        report["delta"] = _q_rows(case.delta.vertices)
        report["period_basis"] = _q_rows(case.period_basis)
    elif isinstance(case, FreeLagrangian):
        report["period_basis"] = _q_rows(case.period_basis)
        report["chern"] = _chern(case.chern)
        report["tau"] = [t.to_strings() for t in case.tau_basis]
    elif isinstance(case, OrbifoldBundle):
        report["signature"] = str(case.signature)
        report["monodromy"] = [t.to_strings() for t in case.monodromy.values]
    return report


def model_report(name: str, model: Union[ModelDescriptor, OrbifoldBundleDescriptor]) -> Dict:
    report = {"schema": SCHEMA_VERSION, "name": name, "total_dim": model.total_dim}

    if isinstance(model, ModelDescriptor):
        report.update({
            "model":                "G x_H M_h",
            "fiber":                _q_rows(model.fiber.vertices),
            "fiber_dim":            model.fiber_dim,
            "hamiltonian_subtorus": [list(r) for r in model.hamiltonian_subtorus.basis()],
            "base_dim":             model.base_dim,
            "base_period_basis":    _q_rows(model.base_period_basis),
            "base_chern":           _chern(model.base_chern),
            "free_complement_dim":  model.free_complement_dim,
            "nilpotency_step":      model.nilpotency_step,
        })
        if model.first_betti is not None:
            report["base_first_betti"] = model.first_betti
        return report

    presentation = model.presentation
    report.update({
        "model":                "orbifold bundle",
        "signature":            str(model.signature),
        "generators":           list(presentation.generators),
        "relators":             list(presentation.relators),
        "monodromy":            {label: t.to_strings() for label, t in model.monodromy.items()},
        "euler_characteristic": str(model.euler_characteristic),
        "first_betti":          model.first_betti,
    })
    return report


def homology_report(sig: FuchsianSignature, homology: AbelianInvariants, bad: bool, euler: Fraction) -> Dict:
    return {
        "schema":     SCHEMA_VERSION,
        "signature":  str(sig),
        "free_rank":  homology.free_rank,
        "torsion":    list(homology.torsion),
        "group":      str(homology),
        "bad":        bad,
        "euler":      str(euler),
    }


def verification_report(kind: str, summary: Dict, seed: int) -> Dict:
    report = {"schema": SCHEMA_VERSION, "verify": kind, "seed": seed}
    report.update(summary)
    if kind == "hamiltonian":
        report["approximate"] = True
    return report


def write_table(df: pd.DataFrame, path: Union[str, Path]):
    """
    Sweep table as CSV; floats at full precision.
    """
    df.to_csv(path, index=False, float_format="%.17g")
