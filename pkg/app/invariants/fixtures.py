"""
Built-in invariant records for the standard examples.
"""
from fractions import Fraction
from typing import Callable, Dict, Union

from app.exact.torus import Subtorus, Torus, TorusElement
from app.geometry.orbifold import FuchsianSignature, MonodromyHom
from app.geometry.polytope import interval, normalize, simplex
from app.invariants.coisotropic import CoisotropicInvariants
from app.invariants.symplectic_orbit import SymplecticOrbitInvariants

Record = Union[CoisotropicInvariants, SymplecticOrbitInvariants]

_ZERO_2  = ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))
_OMEGA_2 = ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)))
_E1, _E2 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))


def kodaira() -> CoisotropicInvariants:
    """
    Kodaira variety: free Lagrangian T^2-action, P = Z^2, c(e1, e2) = e1.
    """
    torus = Torus(2)
    return CoisotropicInvariants(
        torus=torus,
        omega_t=_ZERO_2,
        t_h=Subtorus.trivial(torus),
        delta=normalize([(0, 0)]),
        period_basis=(_E1, _E2),
        chern={(0, 1): _E1},
        tau_basis=(TorusElement.identity(2), TorusElement.identity(2)),
        name="kodaira",
    )


def cp2(scale=1) -> CoisotropicInvariants:
    """
    Toric CP^2 with momentum polytope scale times the standard simplex.
    """
    torus = Torus(2)
    return CoisotropicInvariants(
        torus=torus,
        omega_t=_ZERO_2,
        t_h=Subtorus.full(torus),
        delta=simplex(2, scale),
        period_basis=(),
        chern={},
        tau_basis=(),
        name="cp2",
    )


def s2xt2() -> CoisotropicInvariants:
    """
    Mixed action on S^2 x T^2 without fixed points: the circle spanned by
    e2 rotates the sphere with the height as momentum map, so T_h has
    dimension 1 and delta = [-1, 1]; the complementary circle is free.
    """
    torus = Torus(2)
    return CoisotropicInvariants(
        torus=torus,
        omega_t=_ZERO_2,
        t_h=Subtorus.spanned_by(torus, [(0, 1)]),
        delta=interval(-1, 1),
        period_basis=((Fraction(1),),),
        chern={},
        tau_basis=(TorusElement.identity(2),),
        name="s2xt2",
    )


def s2quot() -> SymplecticOrbitInvariants:
    """
    S^2 x_{Z/2} T^2: orbit space S^2 with two cone points of order 2.
    """
    torus = Torus(2)
    sig = FuchsianSignature(0, (2, 2))
    half = TorusElement.parse(["1/2", "0"])
    return SymplecticOrbitInvariants(
        torus=torus,
        omega_t=_OMEGA_2,
        signature=sig,
        area=Fraction(1),
        monodromy=MonodromyHom(sig, torus, (), (half, half)),
        name="s2quot",
    )


def t4() -> SymplecticOrbitInvariants:
    """
    T^2 acting on T^4 = T^2 x T^2 by translations on the first factor.
    """
    torus = Torus(2)
    sig = FuchsianSignature(1)
    identity = TorusElement.identity(2)
    return SymplecticOrbitInvariants(
        torus=torus,
        omega_t=_OMEGA_2,
        signature=sig,
        area=Fraction(1),
        monodromy=MonodromyHom(sig, torus, (identity, identity), ()),
        name="t4",
    )


def s2xt2free() -> SymplecticOrbitInvariants:
    """
    Free action on S^2 x T^2 by translations of the T^2 factor; orbit space S^2.
    """
    torus = Torus(2)
    sig = FuchsianSignature(0)
    return SymplecticOrbitInvariants(
        torus=torus,
        omega_t=_OMEGA_2,
        signature=sig,
        area=Fraction(2),
        monodromy=MonodromyHom(sig, torus, (), ()),
        name="s2xt2free",
    )


FIXTURES: Dict[str, Callable[[], Record]] = {
    "kodaira":   kodaira,
    "cp2":       cp2,
    "s2xt2":     s2xt2,
    "s2quot":    s2quot,
    "t4":        t4,
    "s2xt2free": s2xt2free,
}


def get_fixture(name: str) -> Record:
    if name not in FIXTURES:
        raise ValueError(f"Unknown fixture '{name}'. Known: {', '.join(FIXTURES)}.")
    return FIXTURES[name]()
