import logging
from fractions import Fraction
from math import lcm, prod
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from app.analytics.momentum import hamiltonian_grid
from app.config import Settings
from app.exact.torus import TorusElement
from app.geometry.orbifold import FuchsianSignature, is_bad_signature, orbifold_euler, orbifold_homology
from app.invariants.coisotropic import (
    CoisotropicInvariants,
    GroupElement,
    group_identity,
    group_inverse,
    group_mul,
)

logger = logging.getLogger(__name__)

VERIFICATIONS = ("group-axioms", "hamiltonian", "orbifold")


def run_verification(
    kind: str,
    settings: Settings,
    record: Optional[CoisotropicInvariants] = None
) -> Tuple[pd.DataFrame, Dict]:
    """
    Runs one property sweep and returns the per-trial table with its summary.
    Deterministic for a fixed seed.
    """
    if kind == "group-axioms":
        if record is None:
            raise ValueError("verify group-axioms needs a coisotropic record.")
        df     = group_axiom_sweep(record, settings.trials, settings.seed)
        checks = ["associative", "identity", "inverse"]
    elif kind == "hamiltonian":
        df     = hamiltonian_grid(settings.grid, settings.seed, settings.step, settings.h_max)
        df["within_tolerance"] = df["residual"] <= 1e-6
        checks = ["within_tolerance"]
    elif kind == "orbifold":
        df     = orbifold_sweep(settings.trials, settings.seed)
        checks = ["free_rank_ok", "torsion_ok", "bad_ok"]
    else:
        raise ValueError(f"Unknown verification '{kind}'. Known: {', '.join(VERIFICATIONS)}.")

    logger.info("verification %s ran %d trials", kind, len(df))
    return df, summarize_checks(df, checks)


def summarize_checks(df: pd.DataFrame, checks: List[str]) -> Dict:
    """
    Failure counts per boolean check column.
    """
    failures = {col: int((~df[col].astype(bool)).sum()) for col in checks}
    summary = {
        "trials":   int(len(df)),
        "failures": failures,
        "passed":   all(v == 0 for v in failures.values()),
    }
    if "residual" in df.columns and len(df):
        summary["max_residual"] = float(df["residual"].max())
    return summary


# --- Group axioms on G = T x N ---

def _random_fraction(rng: np.random.Generator, bound: int = 12) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def random_group_element(rng: np.random.Generator, inv: CoisotropicInvariants) -> GroupElement:
    t = TorusElement(tuple(_random_fraction(rng) for _ in range(inv.k)))
    zeta = tuple(_random_fraction(rng) for _ in range(inv.dim_n))
    return GroupElement(t, zeta)


def group_axiom_sweep(inv: CoisotropicInvariants, trials: int, seed: int = 0) -> pd.DataFrame:
    """
    Exact checks of associativity, two-sided identity and inverses on random
    rational triples.
    """
    rng      = np.random.default_rng(seed)
    identity = group_identity(inv)
    rows     = []

    for trial in range(trials):
        a, b, c = (random_group_element(rng, inv) for _ in range(3))
        left  = group_mul(group_mul(a, b, inv), c, inv)
        right = group_mul(a, group_mul(b, c, inv), inv)
        rows.append({
            "trial":       trial,
            "associative": left == right,
            "identity":    group_mul(identity, a, inv) == a == group_mul(a, identity, inv),
            "inverse":     group_mul(a, group_inverse(a, inv), inv) == identity,
        })

    return pd.DataFrame(rows, columns=["trial", "associative", "identity", "inverse"])


# --- Orbifold homology ---

def random_signature(rng: np.random.Generator, max_genus: int = 3, max_cone_points: int = 4,
                     max_order: int = 12) -> FuchsianSignature:
    genus = int(rng.integers(0, max_genus + 1))
    m = int(rng.integers(0, max_cone_points + 1))
    orders = sorted(int(o) for o in rng.integers(2, max_order + 1, size=m))
    return FuchsianSignature(genus, tuple(orders))


def orbifold_sweep(trials: int, seed: int = 0) -> pd.DataFrame:
    """
    Orbifold homology of random signatures against the closed forms: free
    rank 2g and torsion of order prod(o) / lcm(o), the sum of Z/o_k modulo
    the diagonal.
    """
    rng  = np.random.default_rng(seed)
    rows = []

    for _ in range(trials):
        sig       = random_signature(rng)
        homology  = orbifold_homology(sig)
        expected  = prod(sig.orders) // lcm(*sig.orders) if sig.orders else 1
        bad       = is_bad_signature(sig)
        bad_shape = sig.genus == 0 and (
            sig.cone_points == 1 or (sig.cone_points == 2 and sig.orders[0] != sig.orders[1])
        )
        rows.append({
            "signature":     str(sig),
            "homology":      str(homology),
            "euler":         str(orbifold_euler(sig)),
            "bad":           bad,
            "free_rank_ok":  homology.free_rank == 2 * sig.genus,
            "torsion_ok":    homology.torsion_order == expected,
            "bad_ok":        bad == bad_shape,
        })

    return pd.DataFrame(rows, columns=["signature", "homology", "euler", "bad",
                                       "free_rank_ok", "torsion_ok", "bad_ok"])
