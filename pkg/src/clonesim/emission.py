"""Atomic dipole transitions and the stimulated-emission copying model.

An :class:`AtomicSystem` is one ground level plus a manifold of excited
levels, each with a radial dipole factor (user-supplied constants; the
selection-rule structure is entirely angular).  Transition amplitudes use
the Wigner-Eckart factorization of the spherical dipole components
C^(1)_q, so an amplitude is exactly zero whenever the selection rules
Delta l = +-1, Delta m = q fail.

The clonable domain of a system is the span of the polarization
components with at least one allowed transition.  Photons inside it are
copied perfectly by the adaptive-ancilla mechanism: the incoming photon's
amplitudes are transplanted onto the dipole-coupled excited levels, and
that excited superposition plays the ancilla role in the abstract copying
pipeline.  Photons outside the domain raise
:class:`~clonesim.errors.DomainViolationError`; the restriction comes from
the atomic symmetries, not from the copying construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .angular import IrrepLabel, clebsch_gordan
from .copying import CloneReport, CopyBasis, clone
from .errors import DimensionMismatchError, DomainViolationError
from .hilbert import DEFAULT_ATOL, DensityMatrix, Ket, OperatorMatrix, max_abs

#: Amplitudes below this are treated as symmetry-forbidden (they are exact
#: zeros from the CG machinery; the threshold only guards radial rounding).
AMPLITUDE_TOLERANCE = 1e-12

#: A photon is inside the clonable domain iff the norm of its projection
#: outside the domain span is below this.
DOMAIN_MEMBERSHIP_TOLERANCE = 1e-9

#: Default Fock truncation: the smallest space where stimulated and
#: single-photon couplings differ by the sqrt(2) ladder factor.
DEFAULT_N_MAX = 2

_CANONICAL_MODE_LABELS = {-1: "sigma-", 0: "pi", +1: "sigma+"}

_SPHERICAL_VECTORS = {
    -1: np.array([1.0, -1.0j, 0.0]) / sqrt(2.0),
    0: np.array([0.0, 0.0, 1.0], dtype=complex),
    +1: np.array([-1.0, -1.0j, 0.0]) / sqrt(2.0),
}


@dataclass(frozen=True, eq=False)
class PolarizationMode:
    """Photon polarization basis label tied to a spherical dipole component.

    q = -1, 0, +1 correspond to sigma-, pi, sigma+; the cartesian vector
    must match the spherical unit vector convention e_0 = z,
    e_{+-1} = -+(x +- iy)/sqrt(2).
    """

    label: str
    q: int
    cartesian_vector: np.ndarray

    def __post_init__(self) -> None:
        if self.q not in (-1, 0, +1):
            raise ValueError(f"spherical component q={self.q} must be -1, 0, or +1")
        vec = np.array(self.cartesian_vector, dtype=complex)
        if vec.shape != (3,):
            raise ValueError("cartesian_vector must have exactly 3 components")
        if abs(np.linalg.norm(vec) - 1.0) >= DEFAULT_ATOL:
            raise ValueError("cartesian_vector must have unit norm")
        if max_abs(vec - _SPHERICAL_VECTORS[self.q]) >= DEFAULT_ATOL:
            raise ValueError(f"cartesian_vector inconsistent with spherical component q={self.q}")
        vec.setflags(write=False)
        object.__setattr__(self, "cartesian_vector", vec)


def spherical_mode(q: int) -> PolarizationMode:
    """Canonical polarization mode for spherical component q."""
    if q not in _CANONICAL_MODE_LABELS:
        raise ValueError(f"q={q} must be -1, 0, or +1")
    return PolarizationMode(_CANONICAL_MODE_LABELS[q], q, _SPHERICAL_VECTORS[q].copy())


SIGMA_MINUS = spherical_mode(-1)
PI = spherical_mode(0)
SIGMA_PLUS = spherical_mode(+1)

#: The full polarization space, ordered by q.
SPHERICAL_MODES: tuple[PolarizationMode, ...] = (SIGMA_MINUS, PI, SIGMA_PLUS)


def mode_for_label(label: str) -> PolarizationMode:
    for mode in SPHERICAL_MODES:
        if mode.label == label:
            return mode
    raise ValueError(f"unknown polarization mode label {label!r}")


@dataclass(frozen=True)
class AtomicLevel:
    """One atomic level with orbital quantum numbers; parity is (-1)^l."""

    label: str
    l: int
    m: int
    energy: float = 0.0

    def __post_init__(self) -> None:
        if self.l < 0:
            raise ValueError("orbital quantum number l must be non-negative")
        if abs(self.m) > self.l:
            raise ValueError(f"|m|={abs(self.m)} exceeds l={self.l} for level {self.label!r}")

    @property
    def parity(self) -> int:
        return -1 if self.l % 2 else +1

    @property
    def irrep(self) -> IrrepLabel:
        return IrrepLabel(twice_j=2 * self.l, parity=self.parity)


@dataclass(frozen=True, eq=False)
class AtomicSystem:
    """Ground state plus excited-state manifold with radial dipole factors.

    Radial factors default to 1 for every excited level; they are
    dimensionless positive constants multiplying the angular factor.
    """

    ground: AtomicLevel
    excited: tuple[AtomicLevel, ...]
    radial_factors: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "excited", tuple(self.excited))
        if not self.excited:
            raise ValueError("excited manifold must be non-empty")
        labels = [level.label for level in self.excited]
        if len(set(labels)) != len(labels) or self.ground.label in labels:
            raise ValueError("level labels must be unique")
        factors = dict(self.radial_factors) if self.radial_factors else {}
        unknown = set(factors) - set(labels)
        if unknown:
            raise ValueError(f"radial factors for unknown levels: {sorted(unknown)}")
        for label in labels:
            factors.setdefault(label, 1.0)
        if any(value <= 0 for value in factors.values()):
            raise ValueError("radial factors must be positive")
        object.__setattr__(self, "radial_factors", MappingProxyType(factors))

    @property
    def manifold_dim(self) -> int:
        return len(self.excited)

    def excited_level(self, label: str) -> AtomicLevel:
        for level in self.excited:
            if level.label == label:
                return level
        raise KeyError(f"no excited level labeled {label!r}")

    def excited_index(self, label: str) -> int:
        for i, level in enumerate(self.excited):
            if level.label == label:
                return i
        raise KeyError(f"no excited level labeled {label!r}")


def p_manifold_system(radial: float = 1.0, ground_label: str = "g") -> AtomicSystem:
    """The workhorse test atom: s ground state below a full l=1 manifold."""
    return AtomicSystem(
        ground=AtomicLevel(ground_label, l=0, m=0, energy=0.0),
        excited=(
            AtomicLevel("e-", l=1, m=-1, energy=1.0),
            AtomicLevel("e0", l=1, m=0, energy=1.0),
            AtomicLevel("e+", l=1, m=+1, energy=1.0),
        ),
        radial_factors={"e-": radial, "e0": radial, "e+": radial},
    )


@dataclass(frozen=True, eq=False)
class FockLabel:
    """Per-mode photon occupation numbers on a truncated Fock space."""

    occupations: Mapping[str, int]
    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise ValueError("FockLabel requires n_max >= 2")
        occ = dict(self.occupations)
        for label, n in occ.items():
            if not 0 <= n <= self.n_max:
                raise ValueError(f"occupation {n} for mode {label!r} outside [0, {self.n_max}]")
        object.__setattr__(self, "occupations", MappingProxyType(occ))


def transition_amplitude(system: AtomicSystem, e: AtomicLevel, pol: PolarizationMode) -> complex:
    """Dipole amplitude for |e> -> |ground> coupled to polarization ``pol``.

    Wigner-Eckart form: radial factor times
    <l_g m_g | C^(1)_q | l_e m_e> =
        <l_e m_e; 1 q | l_g m_g> * sqrt((2 l_e + 1)/(2 l_g + 1))
                                 * <l_e 0; 1 0 | l_g 0>.

    Exactly zero unless l_g = l_e +- 1 and m_g = m_e + q.
    """
    radial = system.radial_factors.get(e.label)
    if radial is None:
        raise KeyError(f"level {e.label!r} is not in the excited manifold")
    g = system.ground
    angular = (
        clebsch_gordan(e.l, e.m, 1, pol.q, g.l, g.m)
        * sqrt((2 * e.l + 1) / (2 * g.l + 1))
        * clebsch_gordan(e.l, 0, 1, 0, g.l, 0)
    )
    return complex(radial * angular)


def transition_allowed(system: AtomicSystem, e: AtomicLevel, pol: PolarizationMode) -> bool:
    return abs(transition_amplitude(system, e, pol)) > AMPLITUDE_TOLERANCE


def _annihilation(n_max: int) -> np.ndarray:
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(1, n_max + 1):
        a[n - 1, n] = sqrt(n)
    return a


def hamiltonian_basis(
    system: AtomicSystem, modes: Sequence[PolarizationMode], n_max: int
) -> list[tuple[str, tuple[int, ...]]]:
    """Basis labels (atom label, per-mode occupations) in matrix index order.

    Ordering matches the Kronecker convention: atom factor major, then the
    modes in the given order, occupations 0..n_max each.
    """
    atom_labels = [system.ground.label] + [level.label for level in system.excited]
    occupation_lists: list[tuple[int, ...]] = [()]
    for _ in modes:
        occupation_lists = [occ + (n,) for occ in occupation_lists for n in range(n_max + 1)]
    return [(label, occ) for label in atom_labels for occ in occupation_lists]


def build_interaction_hamiltonian(
    system: AtomicSystem,
    modes: Sequence[PolarizationMode],
    n_max: int,
    include_counter_rotating: bool = False,
) -> OperatorMatrix:
    """Dipole coupling Hamiltonian on (atom levels) x (truncated Fock space).

    The excitation-conserving part couples |e, n> to |ground, n+1> with
    weight -(amplitude) * sqrt(n+1) for each allowed transition and mode;
    ``include_counter_rotating`` adds the |e, n> <-> |ground, n-1> pairs
    as well.  Hermitian by construction.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    modes = list(modes)
    if not modes:
        raise ValueError("at least one field mode is required")
    if len({mode.label for mode in modes}) != len(modes):
        raise ValueError("mode labels must be unique")

    atom_dim = 1 + system.manifold_dim
    fock_dim = (n_max + 1) ** len(modes)
    a_single = _annihilation(n_max)
    eye_fock = np.eye(n_max + 1, dtype=complex)

    h = np.zeros((atom_dim * fock_dim, atom_dim * fock_dim), dtype=complex)
    for mode_index, mode in enumerate(modes):
        factors = [a_single if k == mode_index else eye_fock for k in range(len(modes))]
        a_mode = factors[0]
        for factor in factors[1:]:
            a_mode = np.kron(a_mode, factor)
        for level_index, level in enumerate(system.excited):
            amplitude = transition_amplitude(system, level, mode)
            if abs(amplitude) <= AMPLITUDE_TOLERANCE:
                continue
            lower = np.zeros((atom_dim, atom_dim), dtype=complex)
            lower[0, 1 + level_index] = 1.0  # |ground><e|
            emission_term = np.kron(lower, a_mode.conj().T)
            h -= amplitude * emission_term
            h -= np.conj(amplitude) * emission_term.conj().T
            if include_counter_rotating:
                counter_term = np.kron(lower, a_mode)
                h -= amplitude * counter_term
                h -= np.conj(amplitude) * counter_term.conj().T
    return OperatorMatrix(h, hermitian=True)


@dataclass(frozen=True, eq=False)
class ClonableDomain:
    """Polarization components with at least one allowed transition.

    ``basis`` is an orthonormal basis of the spanned subspace, expressed in
    the full polarization space ordered (sigma-, pi, sigma+).
    """

    modes: tuple[PolarizationMode, ...]
    basis: tuple[Ket, ...]

    @property
    def dimension(self) -> int:
        return len(self.modes)

    @property
    def mode_labels(self) -> tuple[str, ...]:
        return tuple(mode.label for mode in self.modes)


def clonable_domain(system: AtomicSystem) -> ClonableDomain:
    """Enumerate the spherical components q with any allowed transition.

    Returns the allowed modes plus an orthonormal basis of their span;
    empty when every transition is symmetry-forbidden.
    """
    allowed: list[PolarizationMode] = []
    basis: list[Ket] = []
    for position, mode in enumerate(SPHERICAL_MODES):
        if any(transition_allowed(system, level, mode) for level in system.excited):
            allowed.append(mode)
            basis.append(Ket.basis_state(len(SPHERICAL_MODES), position, "polarization"))
    return ClonableDomain(modes=tuple(allowed), basis=tuple(basis))


#: Photon basis description: one (mode, excited-level label) pair per
#: photon component, in component order.  ``None`` marks a component with
#: no dipole-coupled level.
ModeMap = Sequence[tuple[PolarizationMode, str | None]]


def _validate_mode_map(photon: Ket, system: AtomicSystem, mode_map: ModeMap) -> list[tuple[PolarizationMode, str | None]]:
    pairs = list(mode_map)
    if len(pairs) != photon.dim:
        raise DimensionMismatchError(
            f"mode map has {len(pairs)} entries for a photon of dim {photon.dim}"
        )
    if len({mode.label for mode, _ in pairs}) != len(pairs):
        raise ValueError("mode map polarization modes must be distinct")
    mapped = [label for _, label in pairs if label is not None]
    if len(set(mapped)) != len(mapped):
        raise ValueError("mode map must be injective on excited levels")
    for label in mapped:
        system.excited_level(label)  # raises KeyError for unknown labels
    return pairs


def adaptive_ancilla(photon: Ket, system: AtomicSystem, mode_map: ModeMap) -> Ket:
    """Excited-manifold state with the photon's amplitudes transplanted.

    Component j of the photon is carried by the excited level
    ``mode_map[j]``; the result is the superposition of those levels with
    the photon's coefficients.  The ancilla is selected by the coupling
    itself, so any photon support on a component whose mapped transition
    is forbidden (or absent) is a domain violation.
    """
    psi = photon.normalize()
    pairs = _validate_mode_map(psi, system, mode_map)
    amplitudes = np.zeros(system.manifold_dim, dtype=complex)
    for j, (mode, label) in enumerate(pairs):
        weight = abs(psi.amplitudes[j])
        if label is None or not transition_allowed(system, system.excited_level(label), mode):
            if weight > DOMAIN_MEMBERSHIP_TOLERANCE:
                raise DomainViolationError(
                    f"photon component {j} ({mode.label}) has amplitude {weight:.3e} "
                    "on a symmetry-forbidden transition"
                )
            continue
        amplitudes[system.excited_index(label)] = psi.amplitudes[j]
    return Ket(amplitudes, "excited-manifold").normalize()


def stimulated_clone(photon: Ket, system: AtomicSystem, mode_map: ModeMap) -> CloneReport:
    """Copy a photon polarization state via the adaptive atomic ancilla.

    The photon must lie in the span of the clonable domain; its amplitudes
    are transplanted onto the mapped excited levels, and the abstract copy
    pipeline runs with the polarization basis as system basis and the
    mapped manifold levels as ancilla basis.  The reported output lives in
    the photon (x) photon space and has fidelity 1.
    """
    psi = photon.normalize()
    pairs = _validate_mode_map(psi, system, mode_map)

    domain = clonable_domain(system)
    allowed_q = {mode.q for mode in domain.modes}
    outside = sqrt(
        sum(abs(psi.amplitudes[j]) ** 2 for j, (mode, _) in enumerate(pairs) if mode.q not in allowed_q)
    )
    if outside > DOMAIN_MEMBERSHIP_TOLERANCE:
        raise DomainViolationError(
            f"photon projection outside the clonable domain has norm {outside:.3e} "
            f"(allowed modes: {list(domain.mode_labels)})"
        )

    manifold_ancilla = adaptive_ancilla(psi, system, pairs)

    # Copy in the subspace of dipole-coupled components; unmapped
    # components carry no support past the checks above.
    coupled = [
        j
        for j, (mode, label) in enumerate(pairs)
        if label is not None and transition_allowed(system, system.excited_level(label), mode)
    ]
    k = len(coupled)
    if k == 0:
        raise DomainViolationError("no photon component couples to the excited manifold")
    compressed = Ket(psi.amplitudes[coupled], psi.space_label).normalize()

    # Ancilla basis: the mapped levels ordered as they appear in the
    # manifold, giving a (generally non-identity) preparation permutation.
    sublevel_order = sorted(coupled, key=lambda j: system.excited_index(pairs[j][1]))
    ancilla_basis = tuple(
        Ket.basis_state(k, sublevel_order.index(j), "mapped-manifold") for j in coupled
    )
    system_basis = tuple(Ket.basis_state(k, i, psi.space_label) for i in range(k))
    report = clone(compressed, CopyBasis(system_basis, ancilla_basis))

    if k == psi.dim:
        return CloneReport(
            input=psi,
            ancilla=manifold_ancilla,
            output=report.output,
            target=report.target,
            fidelity=report.fidelity,
            matched=True,
        )

    # Re-embed the copied pair state into the full photon (x) photon space.
    n = psi.dim
    output = np.zeros(n * n, dtype=complex)
    for ci, i in enumerate(coupled):
        for cj, j in enumerate(coupled):
            output[i * n + j] = report.output.amplitudes[ci * k + cj]
    output_ket = Ket(output, f"{psi.space_label}*{psi.space_label}")
    target = Ket(np.kron(psi.amplitudes, psi.amplitudes), f"{psi.space_label}*{psi.space_label}")
    return CloneReport(
        input=psi,
        ancilla=manifold_ancilla,
        output=output_ket,
        target=target,
        fidelity=abs(np.vdot(target.amplitudes, output_ket.amplitudes)) ** 2,
        matched=True,
    )


def spontaneous_emission_output(
    system: AtomicSystem,
    excited_state: Ket | None = None,
    isotropic: bool = False,
    modes: Sequence[PolarizationMode] = SPHERICAL_MODES,
) -> DensityMatrix:
    """Polarization statistics of vacuum-driven decay, in the ensemble picture.

    Every mode is weighted equally by the vacuum, so each decay channel
    contributes its squared amplitude: the output density matrix is
    diagonal with weights sum_j p_j |amplitude(e_j, q)|^2, normalized over
    ``modes``.  ``isotropic=True`` requests the unpolarized ensemble
    (uniform populations over the manifold); otherwise populations come
    from ``excited_state``.  Coherences between manifold levels are
    deliberately discarded: the statement under test is about statistics,
    not a single pure outcome.
    """
    modes = list(modes)
    if not modes:
        raise ValueError("at least one polarization mode is required")
    if isotropic:
        populations = np.full(system.manifold_dim, 1.0 / system.manifold_dim)
    else:
        if excited_state is None:
            raise ValueError("provide excited_state or set isotropic=True")
        if excited_state.dim != system.manifold_dim:
            raise DimensionMismatchError(
                f"excited state dim {excited_state.dim} != manifold dim {system.manifold_dim}"
            )
        populations = np.abs(excited_state.normalize().amplitudes) ** 2

    weights = np.zeros(len(modes))
    for mode_index, mode in enumerate(modes):
        for level_index, level in enumerate(system.excited):
            amplitude = transition_amplitude(system, level, mode)
            weights[mode_index] += populations[level_index] * abs(amplitude) ** 2
    total = weights.sum()
    if total <= AMPLITUDE_TOLERANCE:
        raise DomainViolationError("no allowed decay channel into the given modes")
    return DensityMatrix(np.diag(weights / total).astype(complex))
