"""Subspace classification, tangency/normality suites, and witness searches.

Frozen oracles on the standard n=2 structure, W = span{e5, e1, e3}
(anti-invariant), f = (1, 0.5, 0.25):

    R(e1, e3)e2 = -0.75 e3 - 0.5 e4   (both semi-symmetric kinds)
    R(e1, e3)e2 = -1.0625 e4          (Schouten-van Kampen, Tanaka-Webster)
    R(e1, e3)e2 = -0.5 e4             (base)

so the stated vanishing of R(X, Y)V on anti-invariant subspaces is false
for generic coefficients; ``normal_slot_form`` reproduces these values.

On the mixed subspace span{xi, (e1 + e3)/sqrt(2), e2} the targeted witness
pair gives normal magnitude 1.5 for the non-metric kind at f = (1, 1, 1).
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from spaceform import (
    MODIFIED_KINDS,
    ConnectionKind,
    FormCoefficients,
    SubspaceClass,
    anti_invariant_closed_forms,
    check_anti_invariant_split,
    check_normal_curvature,
    check_normality_RXYV,
    check_tangency_RXYZ,
    classify_subspace,
    curvature,
    decompose_phi,
    frame_structure,
    make_anti_invariant_subspace,
    make_invariant_subspace,
    make_mixed_subspace,
    normal_basis,
    normal_bundle_witness_search,
    normal_curvature_closed_form,
    normal_curvature_on_tangent,
    normal_slot_form,
    standard_structure,
    subspace_from_vectors,
    tangent_normal_split,
    theorem_suite,
    witness_search,
)
from spaceform.subspaces import (
    expected_tangent,
    normal_slot_zero_expected,
    normal_witness_margin,
    witness_margin,
)

ALL_KINDS = tuple(ConnectionKind)


def theta_mixed_subspace(space, theta=np.pi / 4):
    """Explicit mixed subspace span{xi, cos(t) e1 + sin(t) e3, e2}."""
    e = np.eye(space.d)
    slant = np.cos(theta) * e[0] + np.sin(theta) * e[2]
    return subspace_from_vectors(space, np.array([space.xi, slant, e[1]]))


# ---------------------------------------------------------------------------
# splitting and the phi decomposition
# ---------------------------------------------------------------------------

class TestSplitting:
    def test_split_oracle(self, space2):
        e = np.eye(5)
        W = subspace_from_vectors(space2, np.array([e[4], e[0], e[1]]))
        tan, nor = tangent_normal_split(W, e[0] + e[2])
        assert_allclose(tan, e[0], atol=1e-14, err_msg="tangent part must be e1")
        assert_allclose(nor, e[2], atol=1e-14, err_msg="normal part must be e3")

    def test_member_splits_trivially(self, space2):
        e = np.eye(5)
        W = subspace_from_vectors(space2, np.array([e[4], e[0], e[1]]))
        v = 2.0 * e[0] - 3.0 * e[1]
        tan, nor = tangent_normal_split(W, v)
        assert_allclose(tan, v, atol=1e-14)
        assert_allclose(nor, np.zeros(5), atol=1e-14)

    def test_orthogonal_splits_trivially(self, space2):
        e = np.eye(5)
        W = subspace_from_vectors(space2, np.array([e[4], e[0], e[1]]))
        tan, nor = tangent_normal_split(W, e[3])
        assert_allclose(tan, np.zeros(5), atol=1e-14)
        assert_allclose(nor, e[3], atol=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**31 - 1))
    def test_projection_idempotence(self, seed):
        space = standard_structure(2)
        rng = np.random.default_rng(seed)
        W = subspace_from_vectors(
            space, np.vstack([space.xi, rng.standard_normal((2, 5))]))
        v = rng.standard_normal(5)
        tan, _ = tangent_normal_split(W, v)
        tan2, nor2 = tangent_normal_split(W, tan)
        assert_allclose(tan2, tan, atol=1e-12)
        assert_allclose(nor2, np.zeros(5), atol=1e-12)

    def test_basis_is_orthonormal(self, space2):
        rng = np.random.default_rng(8)
        W = subspace_from_vectors(
            space2, np.vstack([space2.xi, rng.standard_normal((3, 5))]))
        gram = W.basis @ space2.g @ W.basis.T
        assert_allclose(gram, np.eye(W.dim), atol=1e-12,
                        err_msg="basis rows must be g-orthonormal")

    def test_dependent_vectors_rejected(self, space2):
        e = np.eye(5)
        with pytest.raises(ValueError, match="linearly dependent"):
            subspace_from_vectors(space2, np.array([e[0], e[1], e[0] + e[1]]))

    def test_contains_xi_flag(self, space2):
        e = np.eye(5)
        with_xi = subspace_from_vectors(space2, np.array([e[4], e[0]]))
        without = subspace_from_vectors(space2, np.array([e[0], e[1]]))
        assert with_xi.contains_xi
        assert not without.contains_xi


class TestDecomposePhi:
    def test_reeb_vector_decomposes_to_zero(self, space2):
        W = make_invariant_subspace(space2, 1)
        TX, FX = decompose_phi(W, space2.xi)
        assert_allclose(TX, np.zeros(5), atol=1e-14)
        assert_allclose(FX, np.zeros(5), atol=1e-14)

    def test_invariant_has_no_normal_part(self, space2):
        W = make_invariant_subspace(space2, 1)
        rng = np.random.default_rng(1)
        for _ in range(10):
            X = W.basis.T @ rng.standard_normal(W.dim)
            _, FX = decompose_phi(W, X)
            assert np.linalg.norm(FX) <= 1e-12

    def test_anti_invariant_has_no_tangent_part(self, space2):
        W = make_anti_invariant_subspace(space2, 2)
        for u in W.basis:
            if abs(space2.eta_of(u)) > 1e-12:
                continue  # the Reeb direction is annihilated, not split
            TX, _ = decompose_phi(W, u)
            assert np.linalg.norm(TX) <= 1e-12

    def test_parts_recompose_and_are_orthogonal(self, space3):
        W = make_mixed_subspace(space3, seed=5)
        rng = np.random.default_rng(2)
        for _ in range(10):
            X = W.basis.T @ rng.standard_normal(W.dim)
            TX, FX = decompose_phi(W, X)
            assert_allclose(TX + FX, space3.phi @ X, atol=1e-12,
                            err_msg="decomposition must recompose phi X")
            assert abs(space3.inner(TX, FX)) <= 1e-12

    def test_non_tangent_argument_rejected(self, space2):
        W = make_invariant_subspace(space2, 1)
        outside = normal_basis(W)[0]
        with pytest.raises(ValueError, match="tangent argument"):
            decompose_phi(W, outside)


# ---------------------------------------------------------------------------
# constructors and classification
# ---------------------------------------------------------------------------

class TestConstructors:
    @pytest.mark.parametrize("frame", [None, 3, 5])
    @pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 3)])
    def test_invariant(self, n, k, frame):
        space = standard_structure(n) if frame is None else frame_structure(n, frame)
        W = make_invariant_subspace(space, k)
        assert W.dim == 2 * k + 1
        assert W.contains_xi
        assert classify_subspace(W) is SubspaceClass.INVARIANT

    def test_invariant_maximal_is_whole_space(self, space2):
        W = make_invariant_subspace(space2, 2)
        assert W.dim == space2.d
        assert normal_basis(W).shape[0] == 0

    @pytest.mark.parametrize("frame", [None, 3])
    @pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (3, 2), (3, 3), (4, 2)])
    def test_anti_invariant(self, n, k, frame):
        space = standard_structure(n) if frame is None else frame_structure(n, frame)
        W = make_anti_invariant_subspace(space, k)
        assert W.dim == k + 1
        assert W.contains_xi
        assert classify_subspace(W) is SubspaceClass.ANTI_INVARIANT

    def test_anti_invariant_phi_image_is_normal(self, space3):
        W = make_anti_invariant_subspace(space3, 3)
        for u in W.basis:
            image = space3.phi @ u
            tan, _ = tangent_normal_split(W, image)
            assert np.linalg.norm(tan) <= 1e-12

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("seed", [0, 1, 7])
    def test_mixed(self, n, seed):
        space = standard_structure(n)
        W = make_mixed_subspace(space, seed=seed)
        assert W.contains_xi
        assert classify_subspace(W) is SubspaceClass.MIXED

    def test_mixed_deterministic_per_seed(self, space2):
        a = make_mixed_subspace(space2, seed=4)
        b = make_mixed_subspace(space2, seed=4)
        assert_allclose(a.basis, b.basis, atol=0)

    @pytest.mark.parametrize("k", [0, 3])
    def test_invariant_range_rejected(self, space2, k):
        with pytest.raises(ValueError, match="k must be in"):
            make_invariant_subspace(space2, k)

    @pytest.mark.parametrize("k", [0, 3])
    def test_anti_invariant_range_rejected(self, space2, k):
        with pytest.raises(ValueError, match="k must be in"):
            make_anti_invariant_subspace(space2, k)

    def test_explicit_mixed_subspace(self, space2):
        W = theta_mixed_subspace(space2)
        assert classify_subspace(W) is SubspaceClass.MIXED
        # the slant generator splits with equal tangent and normal shares
        slant = W.basis[1]
        TX, FX = decompose_phi(W, slant)
        assert np.linalg.norm(TX) == pytest.approx(np.cos(np.pi / 4), abs=1e-12)
        assert np.linalg.norm(FX) == pytest.approx(np.sin(np.pi / 4), abs=1e-12)


# ---------------------------------------------------------------------------
# tangency suites
# ---------------------------------------------------------------------------

class TestTangency:
    @pytest.mark.parametrize("kind", MODIFIED_KINDS)
    @pytest.mark.parametrize("n", [2, 3])
    def test_invariant_tangency(self, generic, kind, n):
        space = frame_structure(n, 1)
        W = make_invariant_subspace(space, 1)
        r = check_tangency_RXYZ(space, generic, kind, W, samples=100, seed=0)
        assert r.passed, f"{kind.value} n={n}: residual {r.max_residual:.3e}"
        assert r.subspace_class is SubspaceClass.INVARIANT

    @pytest.mark.parametrize("kind", [ConnectionKind.SEMI_SYM_NON_METRIC,
                                      ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                                      ConnectionKind.TANAKA_WEBSTER])
    def test_anti_invariant_tangency_holds(self, space2, generic, kind):
        W = make_anti_invariant_subspace(space2, 2)
        r = check_tangency_RXYZ(space2, generic, kind, W, samples=100, seed=1)
        assert r.passed, f"{kind.value}: residual {r.max_residual:.3e}"

    def test_anti_invariant_metric_kind_fails_generically(self, space2, generic):
        # the normal defect is weighted by f1 - f3 = 0.75 here
        W = make_anti_invariant_subspace(space2, 2)
        r = check_tangency_RXYZ(space2, generic, ConnectionKind.SEMI_SYM_METRIC,
                                W, samples=100, seed=1)
        assert not r.passed
        assert r.max_residual > 0.1

    def test_anti_invariant_metric_kind_passes_at_gate(self, space2):
        coeffs = FormCoefficients(1.0, 0.5, 1.0)  # f1 = f3
        W = make_anti_invariant_subspace(space2, 2)
        r = check_tangency_RXYZ(space2, coeffs, ConnectionKind.SEMI_SYM_METRIC,
                                W, samples=100, seed=1)
        assert r.passed, f"residual {r.max_residual:.3e}"

    def test_mixed_subspace_rejected(self, space2, generic):
        W = make_mixed_subspace(space2, seed=0)
        with pytest.raises(ValueError, match="invariant or anti-invariant"):
            check_tangency_RXYZ(space2, generic, ConnectionKind.SEMI_SYM_METRIC, W)

    def test_expectation_model(self, generic):
        gate = FormCoefficients(1.0, 0.5, 1.0)
        assert expected_tangent(ConnectionKind.SEMI_SYM_METRIC,
                                SubspaceClass.ANTI_INVARIANT, generic) is False
        assert expected_tangent(ConnectionKind.SEMI_SYM_METRIC,
                                SubspaceClass.ANTI_INVARIANT, gate) is True
        for kind in MODIFIED_KINDS:
            assert expected_tangent(kind, SubspaceClass.INVARIANT, generic) is True
            assert expected_tangent(kind, SubspaceClass.MIXED, generic) is False


# ---------------------------------------------------------------------------
# anti-invariant closed forms
# ---------------------------------------------------------------------------

class TestAntiInvariantForms:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n, frame", [(2, None), (3, 2)])
    def test_split_matches_closed_forms(self, generic, kind, n, frame):
        space = standard_structure(n) if frame is None else frame_structure(n, frame)
        W = make_anti_invariant_subspace(space, n)
        r = check_anti_invariant_split(space, generic, kind, W,
                                       samples=100, seed=2)
        assert r.passed, (f"{kind.value} n={n}: tangent gap {r.max_tangent_gap:.3e} "
                          f"normal gap {r.max_normal_gap:.3e}")

    @pytest.mark.parametrize("kind", [ConnectionKind.LEVI_CIVITA,
                                      ConnectionKind.SEMI_SYM_NON_METRIC,
                                      ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                                      ConnectionKind.TANAKA_WEBSTER])
    def test_normal_form_identically_zero(self, space2, generic, kind):
        W = make_anti_invariant_subspace(space2, 2)
        rng = np.random.default_rng(3)
        for _ in range(20):
            X, Y, Z = (W.basis.T @ rng.standard_normal(W.dim) for _ in range(3))
            _, nor = anti_invariant_closed_forms(space2, generic, kind, W, X, Y, Z)
            assert_allclose(nor, np.zeros(5), atol=0,
                            err_msg=f"{kind.value} normal form must be zero")

    def test_metric_kind_normal_form_vanishes_at_gate(self, space2):
        coeffs = FormCoefficients(1.0, 0.5, 1.0)
        W = make_anti_invariant_subspace(space2, 2)
        rng = np.random.default_rng(4)
        X, Y, Z = (W.basis.T @ rng.standard_normal(W.dim) for _ in range(3))
        _, nor = anti_invariant_closed_forms(
            space2, coeffs, ConnectionKind.SEMI_SYM_METRIC, W, X, Y, Z)
        assert_allclose(nor, np.zeros(5), atol=0)

    def test_requires_anti_invariant(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        e = np.eye(5)
        with pytest.raises(ValueError, match="anti-invariant"):
            anti_invariant_closed_forms(space2, generic,
                                        ConnectionKind.SEMI_SYM_METRIC,
                                        W, e[0], e[1], e[0])


# ---------------------------------------------------------------------------
# normality of R(X, Y)V and the refuted vanishing claim
# ---------------------------------------------------------------------------

class TestNormality:
    @pytest.mark.parametrize("kind", MODIFIED_KINDS)
    def test_invariant_tangent_part_vanishes(self, space3, generic, kind):
        W = make_invariant_subspace(space3, 1)
        r = check_normality_RXYV(space3, generic, kind, W, samples=100, seed=5)
        assert r.tangent_ok, f"{kind.value}: residual {r.max_tangent_residual:.3e}"

    @pytest.mark.parametrize("kind", MODIFIED_KINDS)
    def test_anti_invariant_certificate(self, space2, generic, kind):
        W = make_anti_invariant_subspace(space2, 2)
        r = check_normality_RXYV(space2, generic, kind, W, samples=100, seed=6)
        assert r.certificate_ok, (
            f"{kind.value}: certificate gap {r.max_certificate_gap:.3e}")
        assert not r.full_zero_ok, (
            f"{kind.value}: the stated vanishing should fail at generic coefficients")

    def test_frozen_counterexample_values(self, space2, generic):
        e = np.eye(5)
        W = subspace_from_vectors(space2, np.array([e[4], e[0], e[2]]))
        assert classify_subspace(W) is SubspaceClass.ANTI_INVARIANT
        lam = generic.lam
        for kind in (ConnectionKind.SEMI_SYM_METRIC,
                     ConnectionKind.SEMI_SYM_NON_METRIC):
            got = curvature(space2, generic, kind, e[0], e[2], e[1])
            want = -lam * e[2] - generic.f2 * e[3]
            assert_allclose(got, want, atol=1e-15,
                            err_msg=f"{kind.value} counterexample value")
        for kind in (ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                     ConnectionKind.TANAKA_WEBSTER):
            got = curvature(space2, generic, kind, e[0], e[2], e[1])
            want = -(generic.f2 + lam * lam) * e[3]
            assert_allclose(got, want, atol=1e-15,
                            err_msg=f"{kind.value} counterexample value")

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_certified_form_matches_pointwise(self, space2, generic, kind):
        W = make_anti_invariant_subspace(space2, 2)
        perp = normal_basis(W)
        rng = np.random.default_rng(7)
        for _ in range(25):
            X = W.basis.T @ rng.standard_normal(W.dim)
            Y = W.basis.T @ rng.standard_normal(W.dim)
            V = perp.T @ rng.standard_normal(perp.shape[0])
            got = curvature(space2, generic, kind, X, Y, V)
            form = normal_slot_form(space2, generic, kind, W, X, Y, V)
            assert_allclose(got, form, atol=1e-12 * 64,
                            err_msg=f"{kind.value} certified form")

    def test_vanishing_expectation_model(self):
        generic = FormCoefficients(1.0, 0.5, 0.25)
        degenerate_semi = FormCoefficients(1.0, 0.0, 1.0)
        svk_boundary = FormCoefficients(1.0, -1.0, 0.0)  # f2 + (f1-f3)^2 = 0
        for kind in MODIFIED_KINDS:
            assert normal_slot_zero_expected(kind, generic) is False
        for kind in (ConnectionKind.SEMI_SYM_METRIC,
                     ConnectionKind.SEMI_SYM_NON_METRIC):
            assert normal_slot_zero_expected(kind, degenerate_semi) is True
        for kind in (ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                     ConnectionKind.TANAKA_WEBSTER):
            assert normal_slot_zero_expected(kind, svk_boundary) is True
        assert normal_slot_zero_expected(
            ConnectionKind.LEVI_CIVITA, FormCoefficients(2.0, 0.0, 1.0)) is True

    def test_whole_space_is_vacuous(self, space2, generic):
        W = make_invariant_subspace(space2, 2)
        r = check_normality_RXYV(space2, generic,
                                 ConnectionKind.SEMI_SYM_METRIC, W)
        assert r.samples == 0
        assert r.tangent_ok and r.full_zero_ok and r.certificate_ok

    def test_mixed_subspace_rejected(self, space2, generic):
        W = make_mixed_subspace(space2, seed=1)
        with pytest.raises(ValueError, match="invariant or anti-invariant"):
            check_normality_RXYV(space2, generic,
                                 ConnectionKind.SEMI_SYM_METRIC, W)


# ---------------------------------------------------------------------------
# normal-bundle curvature on invariant subspaces
# ---------------------------------------------------------------------------

class TestNormalCurvature:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("n", [2, 3])
    def test_closed_form(self, generic, kind, n):
        space = frame_structure(n, 2)
        W = make_invariant_subspace(space, 1)
        r = check_normal_curvature(space, generic, kind, W, samples=100, seed=8)
        assert r.passed, f"{kind.value} n={n}: gap {r.max_gap:.3e}"

    def test_first_three_kinds_coincide(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        perp = normal_basis(W)
        rng = np.random.default_rng(9)
        U = perp.T @ rng.standard_normal(perp.shape[0])
        V = perp.T @ rng.standard_normal(perp.shape[0])
        X = W.basis.T @ rng.standard_normal(W.dim)
        forms = [normal_curvature_closed_form(space2, generic, kind, U, V, X)
                 for kind in (ConnectionKind.SEMI_SYM_METRIC,
                              ConnectionKind.SEMI_SYM_NON_METRIC,
                              ConnectionKind.SCHOUTEN_VAN_KAMPEN)]
        assert_allclose(forms[0], forms[1], atol=0)
        assert_allclose(forms[0], forms[2], atol=0)

    def test_tanaka_webster_coefficient(self, space2):
        # with f2 = 0 and f1 - f3 = 1 the closed form is 2 g(U, phi V) phi X
        coeffs = FormCoefficients(1.0, 0.0, 0.0)
        W = make_invariant_subspace(space2, 1)
        perp = normal_basis(W)
        U, V = perp[0], perp[1]
        X = W.basis[1]
        value, form = normal_curvature_on_tangent(
            space2, coeffs, ConnectionKind.TANAKA_WEBSTER, W, U, V, X)
        want = 2.0 * space2.inner(U, space2.phi @ V) * (space2.phi @ X)
        assert_allclose(form, want, atol=1e-15)
        assert_allclose(value, want, atol=1e-12)

    def test_metric_kind_vanishes_without_f2(self, space2):
        coeffs = FormCoefficients(1.0, 0.0, 0.0)
        W = make_invariant_subspace(space2, 1)
        perp = normal_basis(W)
        value, form = normal_curvature_on_tangent(
            space2, coeffs, ConnectionKind.SEMI_SYM_METRIC, W,
            perp[0], perp[1], W.basis[1])
        assert_allclose(form, np.zeros(5), atol=0)
        assert_allclose(value, np.zeros(5), atol=1e-12)

    def test_equal_normal_arguments_vanish(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        U = normal_basis(W)[0]
        value, form = normal_curvature_on_tangent(
            space2, generic, ConnectionKind.SEMI_SYM_METRIC, W, U, U, W.basis[1])
        assert_allclose(value, np.zeros(5), atol=1e-12)
        assert_allclose(form, np.zeros(5), atol=1e-15)

    def test_value_stays_tangent(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        perp = normal_basis(W)
        rng = np.random.default_rng(10)
        for kind in ALL_KINDS:
            U = perp.T @ rng.standard_normal(perp.shape[0])
            V = perp.T @ rng.standard_normal(perp.shape[0])
            X = W.basis.T @ rng.standard_normal(W.dim)
            value, _ = normal_curvature_on_tangent(space2, generic, kind,
                                                   W, U, V, X)
            _, nor = tangent_normal_split(W, value)
            assert np.linalg.norm(nor) <= 1e-12

    def test_slot_misuse_rejected(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        perp = normal_basis(W)
        kind = ConnectionKind.SEMI_SYM_METRIC
        with pytest.raises(ValueError, match="U must be normal"):
            normal_curvature_on_tangent(space2, generic, kind, W,
                                        W.basis[1], perp[0], W.basis[1])
        with pytest.raises(ValueError, match="X must be tangent"):
            normal_curvature_on_tangent(space2, generic, kind, W,
                                        perp[0], perp[1], perp[0])

    def test_requires_invariant_subspace(self, space2, generic):
        W = make_anti_invariant_subspace(space2, 2)
        with pytest.raises(ValueError, match="invariant subspace"):
            check_normal_curvature(space2, generic,
                                   ConnectionKind.SEMI_SYM_METRIC, W)


# ---------------------------------------------------------------------------
# witness searches
# ---------------------------------------------------------------------------

class TestWitnessSearch:
    def test_targeted_pair_hits_immediately(self, space2):
        W = theta_mixed_subspace(space2)
        coeffs = FormCoefficients(1.0, 1.0, 1.0)
        w = witness_search(space2, coeffs, ConnectionKind.SEMI_SYM_NON_METRIC,
                           W, budget=500, seed=0)
        assert w.found
        assert w.trials == 1, "the proof-guided pair must be tried first"
        assert w.magnitude == pytest.approx(1.5, abs=1e-9)

    @pytest.mark.parametrize("kind", MODIFIED_KINDS)
    def test_generic_coefficients_find_witnesses(self, space2, generic, kind):
        W = theta_mixed_subspace(space2)
        w = witness_search(space2, generic, kind, W, budget=500, seed=0)
        assert w.found, f"{kind.value}: no witness within budget"
        assert w.magnitude >= 1e-6
        # witnesses are unit vectors, so the certificate is scale-free
        assert np.linalg.norm(w.X) == pytest.approx(1.0, abs=1e-9)
        assert np.linalg.norm(w.Y) == pytest.approx(1.0, abs=1e-9)

    def test_metric_kind_reeb_route(self, space2, generic):
        # with f1 != f3 the Reeb pair exposes the normal defect
        W = make_mixed_subspace(space2, seed=3)
        w = witness_search(space2, generic, ConnectionKind.SEMI_SYM_METRIC,
                           W, budget=500, seed=0)
        assert w.found

    @pytest.mark.parametrize("kind, coeffs", [
        (ConnectionKind.SCHOUTEN_VAN_KAMPEN,
         FormCoefficients(2.0, -1.0 / 3.0, 1.0)),
        (ConnectionKind.TANAKA_WEBSTER, FormCoefficients(1.0, -1.0, 0.0)),
    ])
    def test_boundary_coefficients_yield_nothing(self, space2, kind, coeffs):
        # the witness coefficient vanishes identically on these sets
        W = theta_mixed_subspace(space2)
        w = witness_search(space2, coeffs, kind, W, budget=300, seed=0)
        assert not w.found
        assert w.trials == 300
        assert witness_margin(kind, coeffs) == pytest.approx(0.0)

    def test_invariant_subspace_yields_nothing(self, space2, generic):
        W = make_invariant_subspace(space2, 1)
        w = witness_search(space2, generic, ConnectionKind.SEMI_SYM_NON_METRIC,
                           W, budget=200, seed=0)
        assert not w.found

    def test_margins(self, generic):
        assert witness_margin(ConnectionKind.SEMI_SYM_METRIC, generic) == 0.75
        assert witness_margin(ConnectionKind.SEMI_SYM_NON_METRIC, generic) == 0.5
        assert witness_margin(ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                              generic) == pytest.approx(2.0625)
        assert witness_margin(ConnectionKind.TANAKA_WEBSTER,
                              generic) == pytest.approx(3.5625)
        gate = FormCoefficients(1.0, 0.5, 1.0)
        assert witness_margin(ConnectionKind.SEMI_SYM_METRIC, gate) == 0.5

    def test_normal_margin_gates_metric_kind(self, generic):
        # no Reeb route exists in the normal bundle, so f1 != f3 closes it
        assert normal_witness_margin(ConnectionKind.SEMI_SYM_METRIC,
                                     generic) == 0.0
        gate = FormCoefficients(1.0, 0.5, 1.0)
        assert normal_witness_margin(ConnectionKind.SEMI_SYM_METRIC, gate) == 0.5


class TestNormalBundleWitness:
    def test_mixed_subspace_witness(self, space2, generic):
        W = theta_mixed_subspace(space2)
        for kind in (ConnectionKind.SEMI_SYM_NON_METRIC,
                     ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                     ConnectionKind.TANAKA_WEBSTER):
            w = normal_bundle_witness_search(space2, generic, kind, W,
                                             budget=300, seed=0)
            assert w.found, f"{kind.value}: no normal-bundle witness"
            assert w.magnitude >= 1e-6

    def test_invariant_subspace_yields_nothing(self, space2):
        coeffs = FormCoefficients(1.0, 1.0, 1.0)
        W = make_invariant_subspace(space2, 1)
        w = normal_bundle_witness_search(space2, coeffs,
                                         ConnectionKind.SEMI_SYM_METRIC, W,
                                         budget=200, seed=0)
        assert not w.found

    def test_maximal_anti_invariant_yields_nothing(self, space2):
        coeffs = FormCoefficients(1.0, 1.0, 1.0)  # f1 = f3, f2 != 0
        W = make_anti_invariant_subspace(space2, 2)
        w = normal_bundle_witness_search(space2, coeffs,
                                         ConnectionKind.SEMI_SYM_METRIC, W,
                                         budget=300, seed=0)
        assert not w.found

    def test_non_maximal_anti_invariant_admits_witnesses(self, space2):
        # the invariance of the normal bundle needs the maximal construction
        coeffs = FormCoefficients(1.0, 1.0, 1.0)
        W = make_anti_invariant_subspace(space2, 1)
        w = normal_bundle_witness_search(space2, coeffs,
                                         ConnectionKind.SEMI_SYM_METRIC, W,
                                         budget=300, seed=0)
        assert w.found
        assert w.magnitude > 0.1

    def test_whole_space_has_no_normal_bundle(self, space2, generic):
        W = make_invariant_subspace(space2, 2)
        w = normal_bundle_witness_search(space2, generic,
                                         ConnectionKind.SEMI_SYM_METRIC, W)
        assert not w.found
        assert w.trials == 0


# ---------------------------------------------------------------------------
# composite suite
# ---------------------------------------------------------------------------

class TestTheoremSuite:
    def test_generic_run_matches_model(self, generic):
        result = theorem_suite(generic, ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                               dims=(2,), seeds=(1,), samples=40, budget=200)
        assert result.ok
        checks = {e.check for e in result.entries}
        assert checks == {
            "invariant-tangency", "anti-invariant-tangency",
            "anti-invariant-split", "normal-slot-invariant",
            "normal-slot-certificate", "normal-slot-zero",
            "normal-bundle-closed-form", "mixed-witness",
            "normal-bundle-witness",
        }

    def test_refuted_claim_rows(self, generic):
        result = theorem_suite(generic, ConnectionKind.TANAKA_WEBSTER,
                               dims=(2,), seeds=(), samples=40, budget=200)
        rows = [e for e in result.entries if e.check == "normal-slot-zero"]
        assert rows, "the vanishing claim must be measured"
        for e in rows:
            assert e.stated is True
            assert e.expected_pass is False
            assert not e.passed
            assert e.detail > 0.1
        assert result.ok  # model agreement, not claim agreement

    def test_gated_expectation_rows(self, generic):
        result = theorem_suite(generic, ConnectionKind.SEMI_SYM_METRIC,
                               dims=(2,), seeds=(), samples=40, budget=200)
        anti = [e for e in result.entries if e.check == "anti-invariant-tangency"]
        assert all(e.expected_pass is False and not e.passed for e in anti)
        gated = [e for e in result.entries if e.check == "normal-bundle-witness"]
        assert all(e.skipped for e in gated), "margin 0 must skip, never pass"

    def test_boundary_coefficients_skip_witness(self):
        boundary = FormCoefficients(2.0, -1.0 / 3.0, 1.0)
        result = theorem_suite(boundary, ConnectionKind.SCHOUTEN_VAN_KAMPEN,
                               dims=(2,), seeds=(), samples=40, budget=200)
        mixed = [e for e in result.entries if e.check == "mixed-witness"]
        assert all(e.skipped for e in mixed)
        assert result.ok
