"""Cone and prism operators on product chains, Ext certificates, and the join theorem.

For an apex ``a`` and a product cell ``s1 x s2`` of the deleted product of K,
``a(s1 x s2) = a s1 x s2`` and ``ab(s1 x s2) = (-1)^dim(s1) a s1 x b s2``, where
``a s`` puts the apex first before canonicalising.  The boundary laws

    d a(x)  = x - a(d~x)
    d ab(x) = tau#(b(tau# x)) - a(x) + ab(d~x)

hold exactly when ``d~`` is the boundary that keeps the augmentation term (a
vertex factor has the empty simplex as its face, and ``a`` sends the empty
simplex to the vertex ``a``); product terms with an empty factor are dropped.
On cells whose factors both have dimension at least one, ``d~ = d``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable

from .chains import CellComplex, Chain, Cochain
from .deleted import (DeletedProduct, QuotientComplex, Z2CellComplex, build_deleted_product, cells_to_json,
                      product_cell_boundary, project_chain, transfer_chain, transfer_cochain)
from .linalg import homology_with_torsion_lifts
from .simplicial import SimplicialComplex, canonicalize_simplex, fresh_apexes, join_complex
from .smith import (InvariantViolation, class_vanishes, quotient_of, resolution_of_one, restrict_resolution,
                    smith_classes, verify_resolution)

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


class TheoremViolation(RuntimeError):
    """The two independent routes of the join check disagree."""


# product-chain helpers (pure, no complex needed) ------------------------------

def chain_boundary(x: Chain) -> Chain:
    acc: dict = {}
    for cell, c in x.terms.items():
        for face, v in product_cell_boundary(cell).items():
            acc[face] = acc.get(face, 0) + c * v
    return Chain(x.dim - 1, acc, x.ring, x.complex_id)


def chain_involution(x: Chain) -> Chain:
    acc: dict = {}
    for (a, b), c in x.terms.items():
        acc[(b, a)] = acc.get((b, a), 0) + c * (-1) ** ((len(a) - 1) * (len(b) - 1))
    return Chain(x.dim, acc, x.ring, x.complex_id)


def augmented_boundary(x: Chain) -> Chain:
    """Product boundary in which a vertex factor contributes the empty simplex."""
    acc: dict = {}
    for (a, b), c in x.terms.items():
        for k in range(len(a)):
            face = (a[:k] + a[k + 1:], b)
            acc[face] = acc.get(face, 0) + c * (-1) ** k
        sa = (-1) ** (len(a) - 1)
        for k in range(len(b)):
            face = (a, b[:k] + b[k + 1:])
            acc[face] = acc.get(face, 0) + c * sa * (-1) ** k
    return Chain(x.dim - 1, acc, x.ring, x.complex_id)


def _check_apex(apex: int, x: Chain) -> None:
    for a, b in x.terms:
        if apex in a or apex in b:
            raise ValueError(f"apex {apex} is already a vertex of the cell {a} x {b}")


def cone_chain_v(apex: int, x: Chain) -> Chain:
    """``v(s1 x s2) = v s1 x s2``; terms whose second factor is empty are dropped."""
    _check_apex(apex, x)
    acc: dict = {}
    for (a, b), c in x.terms.items():
        if not b:
            continue
        s = canonicalize_simplex((apex, *a))
        key = (s.vertices, b)
        acc[key] = acc.get(key, 0) + c * s.sign
    return Chain(x.dim + 1, acc, x.ring)


def prism_chain_vw(v: int, w: int, x: Chain) -> Chain:
    """``vw(s1 x s2) = (-1)^dim(s1) v s1 x w s2``."""
    if v == w:
        raise ValueError("prism apexes must differ")
    _check_apex(v, x)
    _check_apex(w, x)
    acc: dict = {}
    for (a, b), c in x.terms.items():
        sa = canonicalize_simplex((v, *a))
        sb = canonicalize_simplex((w, *b))
        key = (sa.vertices, sb.vertices)
        acc[key] = acc.get(key, 0) + c * (-1) ** (len(a) - 1) * sa.sign * sb.sign
    return Chain(x.dim + 2, acc, x.ring)


def has_vertex_factor(x: Chain) -> bool:
    return any(len(a) == 1 or len(b) == 1 for a, b in x.terms)


def cone_boundary_law(apex: int, x: Chain) -> tuple[Chain, Chain]:
    """Both sides of ``d v(x) = x - v(d~x)``."""
    lhs = chain_boundary(cone_chain_v(apex, x))
    rhs = _plain(x) - cone_chain_v(apex, augmented_boundary(x))
    return lhs, rhs


def prism_boundary_law(v: int, w: int, x: Chain) -> tuple[Chain, Chain]:
    """Both sides of ``d vw(x) = tau#(w(tau# x)) - v(x) + vw(d~x)``."""
    lhs = chain_boundary(prism_chain_vw(v, w, x))
    rhs = (chain_involution(cone_chain_v(w, chain_involution(x))) - cone_chain_v(v, x)
           + prism_chain_vw(v, w, augmented_boundary(x)))
    return lhs, rhs


def second_factor_cone(w: int, x: Chain) -> Chain:
    """``s1 x w s2``, computed directly."""
    _check_apex(w, x)
    acc: dict = {}
    for (a, b), c in x.terms.items():
        s = canonicalize_simplex((w, *b))
        acc[(a, s.vertices)] = acc.get((a, s.vertices), 0) + c * s.sign
    return Chain(x.dim + 1, acc, x.ring)


def conjugation_identity(w: int, x: Chain) -> tuple[Chain, Chain]:
    """Both sides of ``s1 x w s2 = (-1)^dim(s1) tau# w(tau# (s1 x s2))`` extended linearly."""
    lhs = second_factor_cone(w, x)
    acc: dict = {}
    for cell, c in x.terms.items():
        one = Chain(x.dim, {cell: c}, x.ring)
        term = chain_involution(cone_chain_v(w, chain_involution(one)))
        for k, v in term.terms.items():
            acc[k] = acc.get(k, 0) + v * (-1) ** (len(cell[0]) - 1)
    return lhs, Chain(x.dim + 1, acc, x.ring)


def _plain(x: Chain) -> Chain:
    return Chain(x.dim, x.terms, x.ring)


# Ext certificates ---------------------------------------------------------------

@dataclass
class TorsionCertificate:
    dim: int
    chain: Chain          # c, with boundary n * cycle
    modulus: int          # n > 1
    cycle: Chain          # d
    value: int            # phi(c) mod n
    complex_name: str = ""

    def summary(self) -> dict[str, Any]:
        return {
            "complex": self.complex_name, "dimension": self.dim, "modulus": self.modulus,
            "value_mod_n": self.value,
            "chain": _terms_json(self.chain), "cycle": _terms_json(self.cycle),
        }


def _terms_json(x: Chain) -> list[dict]:
    return [{"cell": cells_to_json(k), "coeff": v} for k, v in sorted(x.terms.items())]


def ext_certificate_verify(L: CellComplex, phi: Cochain, cert: TorsionCertificate) -> bool:
    """``d c = n d``, ``d`` a cycle, and ``phi(c)`` nonzero mod ``n``."""
    if phi.dim != cert.dim or cert.chain.dim != cert.dim or cert.cycle.dim != cert.dim - 1:
        raise ValueError(f"dimension mismatch: cochain {phi.dim}, chain {cert.chain.dim}, cycle {cert.cycle.dim}")
    n = cert.modulus
    if n <= 1 or not L.is_cocycle(phi):
        return False
    if _plain(L.boundary(cert.chain)) != _plain(cert.cycle) * n:
        return False
    if not L.is_cycle(cert.cycle):
        return False
    return phi.evaluate(cert.chain) % n != 0


def vanishes_on_cycles(L: CellComplex, phi: Cochain) -> bool:
    return all(phi.evaluate(z) == 0 for z in L.cycle_basis(phi.dim))


def ext_certificate_search(L: CellComplex, phi: Cochain, i: int | None = None) -> TorsionCertificate:
    """Scan the torsion lifts of ``H_{i-1}`` for one on which ``phi`` is nonzero mod the order."""
    i = phi.dim if i is None else i
    if phi.dim != i:
        raise ValueError(f"cochain of dimension {phi.dim} given for degree {i}")
    if not L.is_cocycle(phi):
        raise PreconditionError("cochain is not a cocycle")
    if not vanishes_on_cycles(L, phi):
        raise PreconditionError("cochain is nonzero on some cycle; the class is not pure torsion")
    if L.is_coboundary(phi):
        raise PreconditionError("cochain is a coboundary; there is nothing to certify")
    d_prev = L.boundary_matrix(i - 1) if i - 1 > 0 else None
    hom = homology_with_torsion_lifts(d_prev, L.boundary_matrix(i), n_cells=L.n_cells(i - 1), degree=i - 1)
    for t in hom.torsion:
        c = L.from_vector(i, t.lift)
        val = phi.evaluate(c) % t.order
        if val:
            return TorsionCertificate(i, c, t.order, L.from_vector(i - 1, t.cycle), val, L.name)
    raise InvariantViolation("no torsion lift detects a nonzero class that vanishes on cycles")


def mod2_cycle_certificate(L: CellComplex, rep: Cochain) -> Chain | None:
    """A mod-2 cycle on which ``rep`` is 1, or ``None`` when the mod-2 class is zero.

    On a complex with involution the representative is read on the quotient
    through its domain values.
    """
    if isinstance(L, Z2CellComplex):
        Q = quotient_of(L)
        rep = Q.cochain(rep.dim, ((c, v) for c, v in rep.terms.items() if L.in_domain(c)), "Z2")
        L = Q
    rep = rep.mod2()
    for z in L.cycle_basis(rep.dim, "Z2"):
        if rep.evaluate(z) % 2:
            return z
    return None


# the join theorem ---------------------------------------------------------------

@dataclass
class JoinCertificate:
    mode: str                            # "Z" or "Z2"
    apexes: tuple[int, int, int]         # u < v < w
    source_chain: Chain                  # c (or z) on the deleted product of K
    lifted: Chain                        # zeta on the deleted product of [3]*K
    modulus: int
    witness: Chain                       # d~ with d pi# zeta = n d~ (zero in mod-2 mode)
    projected: Chain                     # pi# zeta
    checks: dict[str, bool] = field(default_factory=dict)

    def summary(self) -> dict[str, Any]:
        return {
            "mode": self.mode, "apexes": list(self.apexes), "modulus": self.modulus,
            "source_support": len(self.source_chain), "lifted_support": len(self.lifted),
            "projected_support": len(self.projected), "witness_support": len(self.witness),
            "checks": self.checks,
        }


def _sum(chains: Iterable[Chain]) -> Chain:
    chains = list(chains)
    out = Chain(chains[0].dim, {}, chains[0].ring)
    for c in chains:
        out = out + _plain(c)
    return out


def build_join_certificate(K: SimplicialComplex, m: int, source, mode: str = "Z",
                           QK: QuotientComplex | None = None, QL: QuotientComplex | None = None) -> JoinCertificate:
    """Lift a source certificate on the quotient of the deleted product of K to [3]*K.

    Integer mode takes a :class:`TorsionCertificate` ``(c~, n, z~)`` and forms
    ``zeta = vw(c) + wu(c) - vu(c)`` with ``c = pibar#(c~)``.  Mod-2 mode takes a
    mod-2 cycle ``z~`` and forms ``zeta = vw(z) + wu(z) + uv(z)``.
    """
    _check_m(m)
    QK = QK or quotient_of(build_deleted_product(K))
    u, v, w = fresh_apexes(K, 3)
    if QL is None:
        QL = quotient_of(build_deleted_product(join_complex([u, v, w], K)))
    checks: dict[str, bool] = {}
    if mode == "Z":
        if not isinstance(source, TorsionCertificate):
            raise PreconditionError("integer mode needs a TorsionCertificate source")
        n = source.modulus
        if n <= 1:
            raise PreconditionError("source modulus must exceed 1")
        c = _plain(transfer_chain(QK, source.chain))
        z = _plain(transfer_chain(QK, source.cycle))
        if c.dim != m:
            raise PreconditionError(f"source chain has dimension {c.dim}, expected {m}")
        checks["source_boundary"] = chain_boundary(c) == z * n
        checks["source_is_delta_chain"] = chain_involution(c) == c
        if has_vertex_factor(c):
            raise PreconditionError("source chain has a vertex factor; the cone laws need positive-dimensional factors")
        zeta = prism_chain_vw(v, w, c) + prism_chain_vw(w, u, c) - prism_chain_vw(v, u, c)
        tail = prism_chain_vw(v, w, z) + prism_chain_vw(w, u, z) - prism_chain_vw(v, u, z)
        wc = cone_chain_v(w, c)
        expected = chain_involution(wc) - wc + tail * n
        checks["zeta_boundary"] = chain_boundary(zeta) == expected
        projected = _plain(project_chain(QL, zeta))
        witness = _plain(project_chain(QL, tail))
        checks["projected_boundary"] = _plain(QL.boundary(projected)) == witness * n
        checks["witness_is_cycle"] = QL.is_cycle(witness)
    elif mode == "Z2":
        zt = source.mod2() if isinstance(source, Chain) else None
        if zt is None or zt.dim != m:
            raise PreconditionError("mod-2 mode needs a mod-2 cycle of dimension m on the quotient")
        n = 2
        z = transfer_chain(QK, zt)
        z = Chain(m, z.terms, "Z2")
        checks["source_is_cycle"] = chain_boundary(z).is_zero()
        if has_vertex_factor(z):
            raise PreconditionError("source cycle has a vertex factor; the cone laws need positive-dimensional factors")
        zeta = prism_chain_vw(v, w, z) + prism_chain_vw(w, u, z) + prism_chain_vw(u, v, z)
        cones = cone_chain_v(v, z) + cone_chain_v(u, z) + cone_chain_v(w, z)
        checks["zeta_boundary"] = chain_boundary(zeta) == cones + chain_involution(cones)
        projected = Chain(m + 2, project_chain(QL, zeta).terms, "Z2")
        witness = Chain(m + 1, {}, "Z2")
        checks["projected_is_cycle"] = QL.is_cycle(projected)
    else:
        raise ValueError(f"mode must be 'Z' or 'Z2', got {mode!r}")
    if not all(checks.values()):
        failed = [k for k, ok in checks.items() if not ok]
        raise InvariantViolation(f"join certificate identities failed: {failed}")
    source_chain = c if mode == "Z" else z
    return JoinCertificate(mode, (u, v, w), source_chain, zeta, n, witness, projected, checks)


def _check_m(m: int) -> None:
    if m % 2:
        raise PreconditionError("only even m is supported: the join argument is restricted to even degrees")
    if m < 2:
        raise PreconditionError("m must be at least 2")


@dataclass
class JoinReport:
    complex_name: str
    m: int
    mode: str
    hypothesis: bool
    direct_nonzero: bool                 # route (d): class in degree m+2 of the join
    certificate_nonzero: bool | None = None
    source: Any = None
    certificate: JoinCertificate | None = None
    trace: list[tuple[str, int]] = field(default_factory=list)

    @property
    def agree(self) -> bool | None:
        if self.certificate_nonzero is None:
            return None
        return self.certificate_nonzero == self.direct_nonzero

    def summary(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "complex": self.complex_name, "m": self.m, "mode": self.mode,
            "hypothesis": "holds" if self.hypothesis else "fails",
            "direct_nonzero": self.direct_nonzero,
            "certificate_nonzero": self.certificate_nonzero, "agree": self.agree,
            "trace": [{"step": s, "value": v} for s, v in self.trace],
        }
        if isinstance(self.source, TorsionCertificate):
            out["source"] = self.source.summary()
        elif isinstance(self.source, Chain):
            out["source"] = {"mod2_cycle": [cells_to_json(c) for c in sorted(self.source.cells())]}
        if self.certificate is not None:
            out["certificate"] = self.certificate.summary()
        return out


def verify_join_theorem(K: SimplicialComplex, m: int, mode: str = "Z") -> JoinReport:
    """Replay the join argument on ``K`` and compare with a direct computation on ``[3]*K``."""
    _check_m(m)
    ring = "Z" if mode == "Z" else "Z2"
    DK = build_deleted_product(K)
    u, v, w = fresh_apexes(K, 3)
    L = join_complex([u, v, w], K)
    DL = build_deleted_product(L)
    QK, QL = quotient_of(DK), quotient_of(DL)

    hypothesis = not smith_classes(DK, m, ring)[m].vanishes
    direct = not smith_classes(DL, m + 2, ring)[m + 2].vanishes
    report = JoinReport(K.name, m, mode, hypothesis, direct)
    if not hypothesis:
        log.info("hypothesis fails for %s in degree %d", K.name, m)
        return report

    psi = resolution_of_one(DL, m + 2, ring=ring)
    iota_psi = restrict_resolution(psi, DL, DK)
    problems = verify_resolution(DK, iota_psi)
    if problems:
        raise InvariantViolation(f"restricted resolution is not a resolution: {problems}")
    nu = transfer_cochain(QK, iota_psi[m])
    if ring == "Z2":
        nu = nu.mod2()
    trace = report.trace

    if mode == "Z":
        source = ext_certificate_search(QK, nu, m)
        cert = build_join_certificate(K, m, source, "Z", QK, QL)
        n = cert.modulus
        c, zeta = cert.source_chain, cert.lifted
        z = _plain(transfer_chain(QK, source.cycle))
        tail = prism_chain_vw(v, w, z) + prism_chain_vw(w, u, z) - prism_chain_vw(v, u, z)
        wc = cone_chain_v(w, c)
        top = transfer_cochain(QL, psi[m + 2])
        steps = [
            ("pibar psi_{m+2}(pi zeta)", top.evaluate(cert.projected)),
            ("delta psi_{m+1}(zeta)", DL.coboundary(psi[m + 1]).evaluate(_on(DL, zeta))),
            ("psi_{m+1}(d zeta)", psi[m + 1].evaluate(_on(DL, chain_boundary(zeta)))),
            ("-psi_{m+1}((1-tau)w(c)) + n psi_{m+1}(tail)",
             -psi[m + 1].evaluate(_on(DL, wc - chain_involution(wc))) + n * psi[m + 1].evaluate(_on(DL, tail))),
        ]
        _assert_equal(steps)
        trace.extend(steps)
        mod_steps = [
            ("-psi_m(d w(c))", -psi[m].evaluate(_on(DL, chain_boundary(wc)))),
            ("-psi_m(c) + n psi_m(w(z))", -psi[m].evaluate(_on(DL, c)) + n * psi[m].evaluate(_on(DL, cone_chain_v(w, z)))),
        ]
        _assert_equal(mod_steps)
        trace.extend(mod_steps)
        final = [("-psi_m(c)", -psi[m].evaluate(_on(DL, c))), ("-nu(c~)", -nu.evaluate(source.chain))]
        _assert_equal(final)
        trace.extend(final)
        if (steps[-1][1] - mod_steps[0][1]) % n:
            raise InvariantViolation("evaluation trace breaks modulo n")
        trace.append(("value mod n", steps[0][1] % n))
        ok = ext_certificate_verify(QL, top, TorsionCertificate(m + 2, cert.projected, n, cert.witness,
                                                                 top.evaluate(cert.projected) % n, QL.name))
        report.certificate_nonzero = ok
        report.source = source
    else:
        zt = mod2_cycle_certificate(QK, nu)
        if zt is None:
            raise InvariantViolation("mod-2 class is nonzero but no cycle detects it")
        cert = build_join_certificate(K, m, zt, "Z2", QK, QL)
        z = cert.source_chain
        top = transfer_cochain(QL, psi[m + 2]).mod2()
        cones = cone_chain_v(v, z) + cone_chain_v(u, z) + cone_chain_v(w, z)
        steps = [
            ("pibar psi_{m+2}(pi zeta)", top.evaluate(cert.projected)),
            ("delta psi_{m+1}(zeta)", DL.coboundary(psi[m + 1]).evaluate(_on(DL, cert.lifted)) % 2),
            ("psi_{m+1}((1+tau)(v(z)+u(z)+w(z)))",
             psi[m + 1].evaluate(_on(DL, cones + chain_involution(cones))) % 2),
            ("psi_m(z)", psi[m].evaluate(_on(DL, z)) % 2),
            ("nu(z~)", nu.evaluate(zt) % 2),
        ]
        _assert_equal(steps)
        trace.extend(steps)
        report.certificate_nonzero = bool(steps[0][1]) and QL.is_cycle(cert.projected)
        report.source = zt
    report.certificate = cert
    for label, value in trace:
        log.debug("%s = %d", label, value)
    if not report.agree:
        raise TheoremViolation(
            f"certificate route says {report.certificate_nonzero}, direct computation says {report.direct_nonzero}")
    return report


def _on(D: DeletedProduct, x: Chain) -> Chain:
    return Chain(x.dim, x.terms, x.ring, D.name)


def _assert_equal(steps: list[tuple[str, int]]) -> None:
    first = steps[0][1]
    for label, value in steps[1:]:
        if value != first:
            raise InvariantViolation(f"evaluation step {label!r} gives {value}, expected {first}")
