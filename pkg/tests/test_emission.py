"""Tests for dipole amplitudes, the interaction Hamiltonian, clonable
domains, and the adaptive-ancilla stimulated cloning pipeline."""

import numpy as np
import pytest

from clonesim.angular import PHOTON_IRREP, contains
from clonesim.copying import CopyBasis, clone
from clonesim.emission import (
    PI,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SPHERICAL_MODES,
    AtomicLevel,
    AtomicSystem,
    FockLabel,
    PolarizationMode,
    adaptive_ancilla,
    build_interaction_hamiltonian,
    clonable_domain,
    hamiltonian_basis,
    p_manifold_system,
    spherical_mode,
    spontaneous_emission_output,
    stimulated_clone,
    transition_amplitude,
)
from clonesim.errors import DimensionMismatchError, DomainViolationError
from clonesim.hilbert import Ket, max_abs, random_ket

from oracles import angular_factor_by_quadrature

INV_SQRT3 = 1.0 / np.sqrt(3.0)
INV_SQRT2 = 1.0 / np.sqrt(2.0)

FULL_MODE_MAP = ((SIGMA_MINUS, "e+"), (PI, "e0"), (SIGMA_PLUS, "e-"))


def two_level_pi_system(radial: float = 1.0) -> AtomicSystem:
    return AtomicSystem(
        ground=AtomicLevel("g", l=0, m=0),
        excited=(AtomicLevel("e0", l=1, m=0, energy=1.0),),
        radial_factors={"e0": radial},
    )


def s_to_s_system() -> AtomicSystem:
    return AtomicSystem(
        ground=AtomicLevel("g", l=0, m=0),
        excited=(AtomicLevel("s2", l=0, m=0, energy=1.0),),
    )


class TestPolarizationMode:
    def test_canonical_vectors(self):
        assert max_abs(PI.cartesian_vector - np.array([0, 0, 1])) < 1e-15
        assert max_abs(SIGMA_PLUS.cartesian_vector - np.array([-1, -1j, 0]) / np.sqrt(2)) < 1e-15
        assert max_abs(SIGMA_MINUS.cartesian_vector - np.array([1, -1j, 0]) / np.sqrt(2)) < 1e-15

    def test_rejects_inconsistent_vector(self):
        with pytest.raises(ValueError):
            PolarizationMode("bad", 0, np.array([1.0, 0.0, 0.0]))

    def test_rejects_non_unit_vector(self):
        with pytest.raises(ValueError):
            PolarizationMode("bad", 0, np.array([0.0, 0.0, 2.0]))

    def test_rejects_bad_q(self):
        with pytest.raises(ValueError):
            spherical_mode(2)


class TestAtomicLevel:
    def test_parity(self):
        assert AtomicLevel("s", l=0, m=0).parity == +1
        assert AtomicLevel("p", l=1, m=0).parity == -1
        assert AtomicLevel("d", l=2, m=1).parity == +1

    def test_rejects_m_beyond_l(self):
        with pytest.raises(ValueError):
            AtomicLevel("bad", l=1, m=2)

    def test_irrep_carries_parity(self):
        irrep = AtomicLevel("p", l=1, m=0).irrep
        assert irrep.j == 1 and irrep.parity == -1


class TestAtomicSystem:
    def test_radial_factors_default_to_one(self):
        system = two_level_pi_system()
        assert system.radial_factors["e0"] == 1.0

    def test_rejects_duplicate_labels(self):
        level = AtomicLevel("e", l=1, m=0)
        with pytest.raises(ValueError):
            AtomicSystem(ground=AtomicLevel("g", l=0, m=0), excited=(level, level))

    def test_rejects_unknown_radial_keys(self):
        with pytest.raises(ValueError):
            AtomicSystem(
                ground=AtomicLevel("g", l=0, m=0),
                excited=(AtomicLevel("e", l=1, m=0),),
                radial_factors={"nope": 1.0},
            )

    def test_rejects_nonpositive_radial(self):
        with pytest.raises(ValueError):
            two_level_pi_system(radial=0.0)

    def test_rejects_empty_manifold(self):
        with pytest.raises(ValueError):
            AtomicSystem(ground=AtomicLevel("g", l=0, m=0), excited=())


class TestFockLabel:
    def test_valid(self):
        label = FockLabel({"pi": 2, "sigma+": 0}, n_max=2)
        assert label.occupations["pi"] == 2

    def test_rejects_small_n_max(self):
        with pytest.raises(ValueError):
            FockLabel({"pi": 1}, n_max=1)

    def test_rejects_occupation_beyond_n_max(self):
        with pytest.raises(ValueError):
            FockLabel({"pi": 3}, n_max=2)


class TestTransitionAmplitude:
    def test_pi_transition_magnitude(self):
        system = two_level_pi_system()
        amp = transition_amplitude(system, system.excited[0], PI)
        assert abs(amp) == pytest.approx(INV_SQRT3, abs=1e-12)

    def test_delta_m_mismatch_is_exact_zero(self):
        system = two_level_pi_system()
        assert transition_amplitude(system, system.excited[0], SIGMA_PLUS) == 0.0

    def test_l_zero_to_zero_forbidden(self):
        system = s_to_s_system()
        for mode in SPHERICAL_MODES:
            assert transition_amplitude(system, system.excited[0], mode) == 0.0

    def test_radial_factor_scales(self):
        weak = two_level_pi_system(radial=0.25)
        amp = transition_amplitude(weak, weak.excited[0], PI)
        assert abs(amp) == pytest.approx(0.25 * INV_SQRT3, abs=1e-12)

    def test_unknown_level_rejected(self):
        system = two_level_pi_system()
        with pytest.raises(KeyError):
            transition_amplitude(system, AtomicLevel("other", l=1, m=0), PI)

    def test_matches_quadrature_oracle_on_p_manifold(self):
        system = p_manifold_system()
        for level in system.excited:
            for mode in SPHERICAL_MODES:
                amp = transition_amplitude(system, level, mode)
                oracle = angular_factor_by_quadrature(0, 0, level.l, level.m, mode.q)
                assert amp == pytest.approx(oracle, abs=1e-10)

    @pytest.mark.parametrize("l_e", [0, 1, 2, 3])
    def test_matches_quadrature_oracle_generic_ground(self, l_e):
        # d ground state picks up transitions from p and f manifolds
        ground = AtomicLevel("g", l=2, m=1)
        excited = tuple(
            AtomicLevel(f"e{m}", l=l_e, m=m, energy=1.0) for m in range(-l_e, l_e + 1)
        )
        system = AtomicSystem(ground=ground, excited=excited)
        for level in excited:
            for mode in SPHERICAL_MODES:
                amp = transition_amplitude(system, level, mode)
                oracle = angular_factor_by_quadrature(2, 1, level.l, level.m, mode.q)
                assert amp == pytest.approx(oracle, abs=1e-10)

    def test_zero_iff_irrep_containment_fails(self):
        # the selection-rule criterion restated at the amplitude level
        for l_g in range(0, 3):
            ground = AtomicLevel("g", l=l_g, m=0)
            for l_e in range(0, 3):
                excited = tuple(
                    AtomicLevel(f"e{m}", l=l_e, m=m, energy=1.0)
                    for m in range(-l_e, l_e + 1)
                )
                system = AtomicSystem(ground=ground, excited=excited)
                for level in excited:
                    for mode in SPHERICAL_MODES:
                        amp = transition_amplitude(system, level, mode)
                        irrep_ok = contains(ground.irrep, (level.irrep, PHOTON_IRREP))
                        weight_ok = ground.m == level.m + mode.q
                        assert (amp != 0.0) == (irrep_ok and weight_ok)


class TestInteractionHamiltonian:
    def test_single_excitation_structure_at_n_max_one(self):
        # radial sqrt(3) sets the pi amplitude to exactly 1
        system = two_level_pi_system(radial=np.sqrt(3.0))
        h = build_interaction_hamiltonian(system, [PI], n_max=1)
        labels = hamiltonian_basis(system, [PI], 1)
        assert h.entries.shape == (4, 4)
        e0_vac = labels.index(("e0", (0,)))
        g_one = labels.index(("g", (1,)))
        coupling = h.entries[g_one, e0_vac]
        assert abs(coupling) == pytest.approx(1.0, abs=1e-12)
        # no other independent couplings
        mask = np.ones_like(h.entries, dtype=bool)
        mask[g_one, e0_vac] = mask[e0_vac, g_one] = False
        assert max_abs(h.entries[mask]) == 0.0

    def test_stimulated_ladder_factor_sqrt2(self):
        system = two_level_pi_system()
        h = build_interaction_hamiltonian(system, [PI], n_max=2)
        labels = hamiltonian_basis(system, [PI], 2)
        single = abs(h.entries[labels.index(("g", (1,))), labels.index(("e0", (0,)))])
        stimulated = abs(h.entries[labels.index(("g", (2,))), labels.index(("e0", (1,)))])
        assert stimulated == pytest.approx(np.sqrt(2.0) * single, abs=1e-12)

    def test_forbidden_transition_gives_zero_block(self):
        h = build_interaction_hamiltonian(s_to_s_system(), list(SPHERICAL_MODES), n_max=2)
        assert max_abs(h.entries) == 0.0

    def test_hermitian_for_random_systems(self, rng):
        for _ in range(5):
            radial = {label: float(rng.uniform(0.2, 3.0)) for label in ("e-", "e0", "e+")}
            system = AtomicSystem(
                ground=AtomicLevel("g", l=0, m=0),
                excited=p_manifold_system().excited,
                radial_factors=radial,
            )
            modes = [SPHERICAL_MODES[i] for i in sorted(rng.choice(3, size=2, replace=False))]
            h = build_interaction_hamiltonian(system, modes, n_max=2)
            assert h.deviation_from_hermiticity() < 1e-12

    def test_conserving_part_commutes_with_excitation_number(self):
        system = p_manifold_system()
        modes = list(SPHERICAL_MODES)
        n_max = 2
        h = build_interaction_hamiltonian(system, modes, n_max)
        labels = hamiltonian_basis(system, modes, n_max)
        excitation = np.diag(
            [
                (0.0 if label == "g" else 1.0) + sum(occ)
                for label, occ in labels
            ]
        ).astype(complex)
        commutator = h.entries @ excitation - excitation @ h.entries
        assert max_abs(commutator) < 1e-10

    def test_counter_rotating_terms_optional(self):
        system = two_level_pi_system(radial=np.sqrt(3.0))
        h = build_interaction_hamiltonian(system, [PI], n_max=1, include_counter_rotating=True)
        labels = hamiltonian_basis(system, [PI], 1)
        counter = h.entries[labels.index(("g", (0,))), labels.index(("e0", (1,)))]
        assert abs(counter) == pytest.approx(1.0, abs=1e-12)

    def test_multimode_couplings_land_on_their_mode(self):
        system = p_manifold_system()
        modes = [SIGMA_MINUS, SIGMA_PLUS]
        h = build_interaction_hamiltonian(system, modes, n_max=1)
        labels = hamiltonian_basis(system, modes, 1)
        # sigma+ couples e-; photon appears in the second mode slot
        row = labels.index(("g", (0, 1)))
        col = labels.index(("e-", (0, 0)))
        assert abs(h.entries[row, col]) == pytest.approx(INV_SQRT3, abs=1e-12)
        # and not in the sigma- slot
        wrong_row = labels.index(("g", (1, 0)))
        assert h.entries[wrong_row, col] == 0.0

    def test_rejects_bad_arguments(self):
        system = two_level_pi_system()
        with pytest.raises(ValueError):
            build_interaction_hamiltonian(system, [], n_max=2)
        with pytest.raises(ValueError):
            build_interaction_hamiltonian(system, [PI], n_max=0)
        with pytest.raises(ValueError):
            build_interaction_hamiltonian(system, [PI, PI], n_max=1)


class TestClonableDomain:
    def test_full_p_manifold_spans_everything(self):
        domain = clonable_domain(p_manifold_system())
        assert domain.mode_labels == ("sigma-", "pi", "sigma+")
        assert domain.dimension == 3
        stacked = np.array([ket.amplitudes for ket in domain.basis])
        assert max_abs(stacked - np.eye(3)) < 1e-15

    def test_single_level_gives_one_dimension(self):
        domain = clonable_domain(two_level_pi_system())
        assert domain.mode_labels == ("pi",)
        assert domain.dimension == 1
        assert domain.basis[0].isclose(Ket.basis_state(3, 1, "polarization"))

    @pytest.mark.parametrize("m,expected", [(-1, "sigma+"), (0, "pi"), (1, "sigma-")])
    def test_m_level_selects_opposite_component(self, m, expected):
        system = AtomicSystem(
            ground=AtomicLevel("g", l=0, m=0),
            excited=(AtomicLevel("e", l=1, m=m),),
        )
        assert clonable_domain(system).mode_labels == (expected,)

    def test_forbidden_system_gives_empty_domain(self):
        domain = clonable_domain(s_to_s_system())
        assert domain.mode_labels == ()
        assert domain.dimension == 0


class TestAdaptiveAncilla:
    def test_basis_photon_maps_to_its_level(self):
        system = p_manifold_system()
        photon = Ket.basis_state(3, 2, "photon")  # sigma+ component
        ancilla = adaptive_ancilla(photon, system, FULL_MODE_MAP)
        assert ancilla.isclose(Ket.basis_state(3, system.excited_index("e-"), "excited-manifold"))

    def test_superposition_amplitudes_transplanted(self):
        system = p_manifold_system()
        photon = Ket(np.array([INV_SQRT2, 0.0, INV_SQRT2]), "photon")  # sigma- + sigma+
        ancilla = adaptive_ancilla(photon, system, FULL_MODE_MAP)
        expected = np.zeros(3, dtype=complex)
        expected[system.excited_index("e+")] = INV_SQRT2
        expected[system.excited_index("e-")] = INV_SQRT2
        assert max_abs(ancilla.amplitudes - expected) < 1e-12
        assert abs(ancilla.norm - 1.0) < 1e-12

    def test_support_on_forbidden_component_raises(self):
        system = two_level_pi_system()
        photon = Ket(np.array([INV_SQRT2, INV_SQRT2]), "photon")
        mode_map = ((PI, "e0"), (SIGMA_PLUS, None))
        with pytest.raises(DomainViolationError, match="sigma\\+"):
            adaptive_ancilla(photon, system, mode_map)

    def test_mode_map_must_cover_photon(self):
        system = p_manifold_system()
        with pytest.raises(DimensionMismatchError):
            adaptive_ancilla(Ket.basis_state(3, 0), system, FULL_MODE_MAP[:2])

    def test_mode_map_must_be_injective(self):
        system = p_manifold_system()
        photon = Ket(np.array([INV_SQRT2, INV_SQRT2]), "photon")
        with pytest.raises(ValueError):
            adaptive_ancilla(photon, system, ((SIGMA_MINUS, "e0"), (PI, "e0")))


class TestStimulatedClone:
    def test_polarization_qubit_clones_perfectly(self, rng):
        system = p_manifold_system()
        mode_map = ((SIGMA_PLUS, "e-"), (SIGMA_MINUS, "e+"))
        for _ in range(25):
            photon = random_ket(2, rng)
            report = stimulated_clone(photon, system, mode_map)
            assert abs(report.fidelity - 1.0) < 1e-10
            direct = np.kron(report.input.amplitudes, report.input.amplitudes)
            assert max_abs(report.output.amplitudes - direct) < 1e-12

    def test_matches_abstract_pipeline_entrywise(self, rng):
        system = p_manifold_system()
        for _ in range(25):
            photon = random_ket(3, rng)
            physical = stimulated_clone(photon, system, FULL_MODE_MAP)
            abstract = clone(photon, CopyBasis.computational(3))
            assert max_abs(physical.output.amplitudes - abstract.output.amplitudes) < 1e-12

    def test_single_ray_domain_still_copies(self):
        system = two_level_pi_system()
        report = stimulated_clone(Ket(np.array([1.0]), "photon"), system, ((PI, "e0"),))
        assert report.fidelity == pytest.approx(1.0, abs=1e-12)

    def test_photon_outside_domain_raises(self):
        system = two_level_pi_system()
        photon = Ket(np.array([INV_SQRT2, INV_SQRT2]), "photon")
        with pytest.raises(DomainViolationError):
            stimulated_clone(photon, system, ((PI, "e0"), (SIGMA_PLUS, None)))

    def test_zero_amplitude_on_uncoupled_component_is_fine(self):
        system = two_level_pi_system()
        photon = Ket(np.array([1.0, 0.0]), "photon")
        report = stimulated_clone(photon, system, ((PI, "e0"), (SIGMA_PLUS, None)))
        assert report.fidelity == pytest.approx(1.0, abs=1e-12)
        expected = np.zeros(4, dtype=complex)
        expected[0] = 1.0
        assert max_abs(report.output.amplitudes - expected) < 1e-12

    def test_ancilla_reported_over_manifold(self):
        system = p_manifold_system()
        photon = Ket(np.array([0.0, 1.0, 0.0]), "photon")  # pi component
        report = stimulated_clone(photon, system, FULL_MODE_MAP)
        assert report.ancilla.dim == system.manifold_dim
        assert report.ancilla.isclose(Ket.basis_state(3, system.excited_index("e0"), "excited-manifold"))


class TestSpontaneousEmission:
    def test_isotropic_manifold_is_maximally_mixed(self):
        rho = spontaneous_emission_output(p_manifold_system(), isotropic=True)
        assert max_abs(rho.entries - np.eye(3) / 3) < 1e-10

    def test_two_mode_restriction_is_maximally_mixed(self):
        rho = spontaneous_emission_output(
            p_manifold_system(), isotropic=True, modes=(SIGMA_MINUS, SIGMA_PLUS)
        )
        assert max_abs(rho.entries - np.eye(2) / 2) < 1e-10

    def test_single_level_is_a_pure_deterministic_channel(self):
        system = p_manifold_system()
        excited = Ket.basis_state(3, system.excited_index("e0"))
        rho = spontaneous_emission_output(system, excited_state=excited)
        expected = np.zeros((3, 3), dtype=complex)
        expected[1, 1] = 1.0  # pi slot
        assert max_abs(rho.entries - expected) < 1e-12

    def test_populations_weight_the_channels(self):
        system = p_manifold_system()
        amps = np.zeros(3, dtype=complex)
        amps[system.excited_index("e0")] = np.sqrt(0.75)
        amps[system.excited_index("e-")] = np.sqrt(0.25)
        rho = spontaneous_emission_output(system, excited_state=Ket(amps))
        # equal angular strengths, so weights follow the populations;
        # e- decays into the sigma+ slot
        assert rho.entries[1, 1].real == pytest.approx(0.75, abs=1e-10)
        assert rho.entries[2, 2].real == pytest.approx(0.25, abs=1e-10)

    def test_unpolarized_even_with_uneven_radial_two_modes(self):
        # with only two levels decaying into disjoint slots, uneven radial
        # factors skew the weights
        system = AtomicSystem(
            ground=AtomicLevel("g", l=0, m=0),
            excited=(AtomicLevel("e-", l=1, m=-1), AtomicLevel("e+", l=1, m=1)),
            radial_factors={"e-": 1.0, "e+": 2.0},
        )
        rho = spontaneous_emission_output(system, isotropic=True, modes=(SIGMA_MINUS, SIGMA_PLUS))
        assert rho.entries[0, 0].real == pytest.approx(4.0 / 5.0, abs=1e-10)
        assert rho.entries[1, 1].real == pytest.approx(1.0 / 5.0, abs=1e-10)

    def test_no_channel_raises(self):
        with pytest.raises(DomainViolationError):
            spontaneous_emission_output(s_to_s_system(), isotropic=True)

    def test_trace_and_hermiticity(self, rng):
        system = p_manifold_system()
        excited = random_ket(3, rng)
        rho = spontaneous_emission_output(system, excited_state=excited)
        assert abs(np.trace(rho.entries) - 1.0) < 1e-10
        assert max_abs(rho.entries - rho.entries.conj().T) < 1e-12

    def test_requires_state_or_isotropic_flag(self):
        with pytest.raises(ValueError):
            spontaneous_emission_output(p_manifold_system())

    def test_manifold_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            spontaneous_emission_output(p_manifold_system(), excited_state=Ket.basis_state(2, 0))
