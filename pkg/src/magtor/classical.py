"""Classical side: twisted cotangent bundles, their symplectomorphisms and flows.

On T*R^{2m} = R^{4m} with coordinates (q, p) the twisted form
Omega = omega_0 + pi^* omega is the constant bilinear form [[C, I], [-I, 0]],
C the Gram matrix of omega.  For a linear symplectomorphism A of (R^{2m}, C)
the map

    Phi(q, p) = (A q + C^{-1} (A^{-T} - I) p, p)

preserves Omega and the kinetic energy H(q, p) = p^T h^{-1} p / 2.

Hamilton's equations use the convention i_X Omega = dH, which gives
qdot = h^{-1} p and pdot = -C h^{-1} p.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from magtor import exact
from magtor.core import (
    MetricGram,
    SymplecticGram,
    check_system,
    signature_from_matrices,
)
from magtor.errors import NotSymplectic, SingularTransform
from magtor.normal_form import ChernFactors

HAMILTON_CONVENTION = "i_X Omega = dH: qdot = h^-1 p, pdot = -omega h^-1 p"


def _exact(A):
    if isinstance(A, (MetricGram, SymplecticGram)):
        return A.matrix
    return exact.as_exact(A)


@dataclass(frozen=True)
class TwistedForm:
    """The constant form [[C, I], [-I, 0]] on R^{4m}."""

    C: tuple

    @classmethod
    def from_magnetic(cls, magnetic):
        return cls(magnetic.entries)

    @property
    def dim(self):
        return 2 * len(self.C)

    @property
    def matrix(self):
        C = np.array(self.C, dtype=object)
        n = C.shape[0]
        I = exact.identity(n)
        return np.block([[C, I], [-I, exact.zeros(n)]])

    @property
    def inverse(self):
        C = np.array(self.C, dtype=object)
        n = C.shape[0]
        I = exact.identity(n)
        return np.block([[exact.zeros(n), -I], [I, C]])


@dataclass(frozen=True)
class PhiMap:
    """Phi with blocks [[A, B], [0, I]]; only A and B are stored."""

    block_qq: tuple
    block_qp: tuple

    @property
    def n(self):
        return len(self.block_qq)

    @property
    def matrix(self):
        A = np.array(self.block_qq, dtype=object)
        B = np.array(self.block_qp, dtype=object)
        return np.block([[A, B], [exact.zeros(self.n), exact.identity(self.n)]])

    def apply(self, state):
        A = exact.to_float(self.block_qq)
        B = exact.to_float(self.block_qp)
        q, p = np.asarray(state.q, dtype=float), np.asarray(state.p, dtype=float)
        return CotangentState(tuple(map(float, A @ q + B @ p)), tuple(map(float, p)))

    def apply_exact(self, state):
        A = np.array(self.block_qq, dtype=object)
        B = np.array(self.block_qp, dtype=object)
        q = np.array([Fraction(x) for x in state.q], dtype=object)
        p = np.array([Fraction(x) for x in state.p], dtype=object)
        return CotangentState(tuple(A @ q + B @ p), tuple(p))


@dataclass(frozen=True)
class CotangentState:
    q: tuple
    p: tuple


def is_linear_symplectomorphism(A, magnetic):
    """A^T C A == C exactly."""
    A = _exact(A)
    C = magnetic.matrix
    if A.shape != C.shape:
        return False
    return exact.equal(A.T @ C @ A, C)


def build_phi(A, magnetic):
    A = _exact(A)
    if not is_linear_symplectomorphism(A, magnetic):
        raise NotSymplectic("A does not preserve the magnetic form")
    C_inv = exact.inverse(magnetic.matrix)
    B = C_inv @ (exact.inverse(A).T - exact.identity(A.shape[0]))
    return PhiMap(tuple(map(tuple, A)), tuple(map(tuple, B)))


@dataclass(frozen=True)
class PhiReport:
    omega_preserved: bool
    hamiltonian_preserved: bool
    lattice_equivariant: bool
    preserves_lattice: bool
    failures: tuple

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {
            "omega_preserved": self.omega_preserved,
            "hamiltonian_preserved": self.hamiltonian_preserved,
            "lattice_equivariant": self.lattice_equivariant,
            "preserves_lattice": self.preserves_lattice,
            "failures": list(self.failures),
        }


def verify_phi(phi, form, h):
    """Check Phi^T Omega Phi = Omega exactly.

    H o Phi = H and Phi(q + q0, p) = (A q0, 0) + Phi(q, p) hold structurally:
    PhiMap fixes p by construction and is linear.  ``preserves_lattice``
    additionally records whether A maps Z^{2m} onto itself.
    """
    failures = []
    if phi.n != len(form.C) or (h is not None and h.dim != phi.n):
        failures.append("dimension mismatch")
        return PhiReport(False, False, False, False, tuple(failures))
    P, Om = phi.matrix, form.matrix
    omega_ok = exact.equal(P.T @ Om @ P, Om)
    if not omega_ok:
        failures.append("Phi^T Omega Phi != Omega")
    A = np.array(phi.block_qq, dtype=object)
    integral = all(Fraction(x).denominator == 1 for x in A.flat)
    lattice = integral and abs(exact.det(A)) == 1
    return PhiReport(omega_ok, True, True, lattice, tuple(failures))


def _compatible_symmetric(r, rng, span):
    """Integer S with R S symmetric, R = diag(r) a divisibility chain."""
    m = len(r)
    S = exact.zeros(m)
    for i in range(m):
        S[i, i] = int(rng.integers(-span, span + 1))
        for j in range(i + 1, m):
            t = int(rng.integers(-span, span + 1))
            S[i, j] = t * (r[j] // r[i])
            S[j, i] = t
    return S


def sample_symplectic_integer(r, seed=None, n_factors=8, span=2):
    """Product of random generators of the integer group preserving block_form(r).

    Generators: [[I, S], [0, I]], [[I, 0], [S, I]] with R S symmetric, and the
    swap [[0, -I], [I, 0]].
    """
    r = r.r if isinstance(r, ChernFactors) else tuple(int(x) for x in r)
    m = len(r)
    rng = np.random.default_rng(seed)
    I, Z = exact.identity(m), exact.zeros(m)
    out = exact.identity(2 * m)
    for _ in range(n_factors):
        kind = int(rng.integers(0, 3))
        if kind == 0:
            g = np.block([[I, _compatible_symmetric(r, rng, span)], [Z, I]])
        elif kind == 1:
            g = np.block([[I, Z], [_compatible_symmetric(r, rng, span), I]])
        else:
            g = np.block([[Z, -I], [I, Z]])
        out = out @ g
    return out


def symplectic_conjugate(A, witness):
    """Transport A from block_form(r) to omega, given omega's normal-form witness W.

    If W^T omega W = block_form(r) and A preserves block_form(r), then
    W A W^{-1} preserves omega.
    """
    W = np.array(witness, dtype=object)
    return W @ np.array(A, dtype=object) @ exact.inverse(W)


def deform_metric(h, A):
    """The pulled-back metric A^T h A (exact)."""
    A = _exact(A)
    if exact.det(A) == 0:
        raise SingularTransform("deformation matrix is singular")
    return MetricGram.from_rows(A.T @ h.matrix @ A)


def sp_generator(magnetic, S, tol=1e-12):
    """X = omega^{-1} S, which lies in sp(omega) for symmetric S.

    tr(X) vanishes identically (skew times symmetric), so A_t = exp(t X) has
    determinant 1 and the metric volume stays fixed along the family.
    """
    S = np.asarray(S, dtype=float)
    if np.max(np.abs(S - S.T), initial=0.0) > tol * max(1.0, np.max(np.abs(S))):
        raise ValueError("generator S must be symmetric")
    S = 0.5 * (S + S.T)
    return np.linalg.solve(magnetic.to_float(), S)


@dataclass(frozen=True, eq=False)
class DeformationFamily:
    base_metric: MetricGram
    magnetic: SymplecticGram
    generator: np.ndarray
    times: tuple

    def __post_init__(self):
        w = self.magnetic.to_float()
        X = self.generator
        resid = np.max(np.abs(X.T @ w + w @ X))
        if resid > 1e-12 * max(1.0, np.max(np.abs(w @ X))):
            raise ValueError("generator is not in sp(omega)")

    def transforms(self):
        return [scipy.linalg.expm(t * self.generator) for t in self.times]

    def metrics(self):
        h = self.base_metric.to_float()
        return [A.T @ h @ A for A in self.transforms()]

    def signatures(self, tol=1e-9):
        return [signature_from_matrices(ht, self.magnetic, tol) for ht in self.metrics()]


def deformation_family(h, magnetic, S, times):
    """Metrics h_t = A_t^T h A_t along A_t = exp(t omega^{-1} S)."""
    fam = DeformationFamily(h, magnetic, sp_generator(magnetic, S), tuple(float(t) for t in times))
    return fam.metrics()


def hamiltonian(sys, state):
    """H = p^T h^{-1} p / 2; exact when p is rational."""
    p = state.p
    if all(isinstance(x, (int, Fraction)) for x in p):
        pv = np.array([Fraction(x) for x in p], dtype=object)
        return pv @ exact.inverse(sys.metric.matrix) @ pv / 2
    pv = np.asarray(p, dtype=float)
    return 0.5 * float(pv @ np.linalg.solve(sys.metric.to_float(), pv))


def _propagator(sys, t):
    """exp(t G), G = -omega h^{-1}, via the orthogonal factor exp(-t S).

    With h = L L^T and u = L^{-1} p the flow is udot = -S u with S skew, so
    exp(t G) = L exp(-t S) L^{-1} and |u| (the energy) is conserved.
    """
    L = np.linalg.cholesky(sys.metric.to_float())
    w = sys.magnetic.to_float()
    X = scipy.linalg.solve_triangular(L, w, lower=True)
    S = scipy.linalg.solve_triangular(L, X.T, lower=True).T
    S = 0.5 * (S - S.T)
    return L, scipy.linalg.expm(-t * S)


def magnetic_flow(sys, state, t, reduce=True):
    """Closed-form magnetic flow.

    p(t) = exp(t G) p0 and q(t) = q0 + h^{-1} G^{-1} (exp(t G) - I) p0, which
    simplifies to q0 - omega^{-1} (p(t) - p0).  With ``reduce`` the position
    is taken mod Z^{2m} into [0, 1)^{2m}.
    """
    check_system(sys)
    q0 = np.asarray(state.q, dtype=float)
    p0 = np.asarray(state.p, dtype=float)
    L, E = _propagator(sys, t)
    u0 = scipy.linalg.solve_triangular(L, p0, lower=True)
    p = L @ (E @ u0)
    q = q0 - np.linalg.solve(sys.magnetic.to_float(), p - p0)
    if reduce:
        q = q - np.floor(q)
        q[q >= 1.0] = 0.0
    return CotangentState(tuple(map(float, q)), tuple(map(float, p)))


@dataclass(frozen=True)
class ConjugacyReport:
    max_deviation: float
    worst: tuple
    energy_exact: bool
    tol: float

    @property
    def ok(self):
        return self.max_deviation <= self.tol and self.energy_exact

    def as_dict(self):
        return {
            "max_deviation": self.max_deviation,
            "worst_state_time": list(self.worst),
            "energy_exact": self.energy_exact,
            "tol": self.tol,
            "passed": self.ok,
        }


def flow_conjugacy_check(sys, A, states, times, tol=1e-8):
    """Compare Phi(flow_t(x)) with flow_t(Phi(x)) on the universal cover."""
    phi = build_phi(A, sys.magnetic)
    worst, where = 0.0, ()
    energy_exact = True
    for i, x in enumerate(states):
        rational = all(isinstance(v, (int, Fraction)) for v in (*x.q, *x.p))
        if rational:
            energy_exact &= hamiltonian(sys, phi.apply_exact(x)) == hamiltonian(sys, x)
        phx = phi.apply(x)
        for t in times:
            lhs = phi.apply(magnetic_flow(sys, x, t, reduce=False))
            rhs = magnetic_flow(sys, phx, t, reduce=False)
            dev = float(np.max(np.abs(np.r_[lhs.q, lhs.p] - np.r_[rhs.q, rhs.p])))
            if dev > worst:
                worst, where = dev, (i, t)
    return ConjugacyReport(worst, where, bool(energy_exact), tol)


def trajectory_rows(sys, state, times):
    """Rows (t, q..., p..., H) for CSV export."""
    rows = []
    for t in times:
        s = magnetic_flow(sys, state, t)
        rows.append([t, *s.q, *s.p, hamiltonian(sys, s)])
    return rows


__all__ = [
    "HAMILTON_CONVENTION",
    "TwistedForm",
    "PhiMap",
    "CotangentState",
    "DeformationFamily",
    "is_linear_symplectomorphism",
    "build_phi",
    "verify_phi",
    "sample_symplectic_integer",
    "symplectic_conjugate",
    "deform_metric",
    "sp_generator",
    "deformation_family",
    "hamiltonian",
    "magnetic_flow",
    "flow_conjugacy_check",
    "trajectory_rows",
]
