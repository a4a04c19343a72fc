import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwsdyn.errors import NonFiniteStateError
from pwsdyn.maps import (
    Branch,
    bcb2d_map,
    border_distance,
    branch_index,
    jacobian,
    lozi_map,
    normal_form_map,
    pws3d_map,
    step,
    step_lanes,
    tent_map,
)

import oracles

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


class TestBorderDistance:
    def test_tent_border(self):
        assert border_distance(tent_map(1.5), [0.5]) == 0.0

    def test_normal_form(self):
        assert border_distance(normal_form_map(), [-0.2]) == pytest.approx(-0.2)

    def test_lozi_uses_first_component_only(self):
        assert border_distance(lozi_map(1.68), [0.3, -1.0]) == pytest.approx(0.3)

    @given(x=finite, rest=st.lists(finite, min_size=2, max_size=2))
    def test_depends_on_first_component(self, x, rest):
        m = pws3d_map()
        assert border_distance(m, [x, rest[0], rest[1]]) == border_distance(m, [x, 0.0, 0.0])

    def test_non_finite_state_rejected(self):
        with pytest.raises(NonFiniteStateError):
            border_distance(tent_map(1.0), [np.nan])


class TestBranchIndex:
    def test_tent_left(self):
        assert branch_index(tent_map(1.5), [0.25]) is Branch.LEFT

    def test_tent_border_is_left_closed(self):
        assert branch_index(tent_map(1.5), [0.5]) is Branch.LEFT

    def test_pws3d_first_component(self):
        assert branch_index(pws3d_map(), [-0.1, 5.0, 5.0]) is Branch.LEFT

    @given(x=finite)
    def test_matches_border_distance_sign(self, x):
        m = normal_form_map()
        expected = Branch.LEFT if border_distance(m, [x]) <= 0 else Branch.RIGHT
        assert branch_index(m, [x]) is expected


class TestStep:
    def test_normal_form(self):
        out = step(normal_form_map(0.5, 0.5, -0.1, 0.1), [-0.2])
        assert out[0] == pytest.approx(0.0, abs=1e-15)

    def test_lozi(self):
        out = step(lozi_map(1.68, 0.5), [0.0, 0.0])
        assert np.allclose(out, [1.0, 0.0])

    def test_pws3d_origin_uses_left_branch(self):
        out = step(pws3d_map(mu=0.1), [0.0, 0.0, 0.0])
        assert np.allclose(out, [0.1, 0.0, 0.0])

    def test_bcb2d(self):
        out = step(bcb2d_map(0.5, 0.5, delta_l=2.0, mu=-1.0), [0.0, 0.0])
        assert out[0] == -1.0 and out[1] == 0.0

    def test_overflow_becomes_typed_error(self):
        m = normal_form_map(a=2.0, b=2.0, l=0.0, mu=0.0)
        with pytest.raises(NonFiniteStateError):
            step(m, [-1e308])

    @given(a=finite, b=finite, l=finite, mu=finite, x=finite)
    def test_normal_form_branch_consistency(self, a, b, l, mu, x):
        m = normal_form_map(a, b, l, mu)
        assert step(m, [x])[0] == oracles.normal_form_branch(a, b, l, mu, x)

    @given(mu=finite, x=finite)
    def test_tent_branch_consistency(self, mu, x):
        assert step(tent_map(mu), [x])[0] == oracles.tent_branch(mu, x)

    @given(a=finite, b=finite, x=finite, y=finite)
    def test_lozi_branch_consistency(self, a, b, x, y):
        out = step(lozi_map(a, b), [x, y])
        assert tuple(out) == oracles.lozi_branch(a, b, x, y)

    @given(x=finite, y=finite, z=finite, dr=finite)
    def test_pws3d_branch_consistency(self, x, y, z, dr):
        m = pws3d_map(delta_r=dr)
        q = {"tau_l": -0.5, "sigma_l": 0.95, "delta_l": 0.2,
             "tau_r": 0.8, "sigma_r": -0.6, "delta_r": dr, "mu": 0.1}
        assert tuple(step(m, [x, y, z])) == oracles.pws3d_branch(q, x, y, z)

    @given(x=finite, y=finite, tl=finite, tr=finite)
    def test_bcb2d_branch_consistency(self, x, y, tl, tr):
        m = bcb2d_map(tl, tr)
        q = {"tau_l": tl, "tau_r": tr, "delta_l": 2.0, "delta_r": -0.2, "mu": -1.0}
        assert tuple(step(m, [x, y])) == oracles.bcb2d_branch(q, x, y)

    @given(mu=finite, eps=st.floats(min_value=1e-12, max_value=1e-6))
    def test_tent_continuity_at_border(self, mu, eps):
        m = tent_map(mu)
        gap = abs(step(m, [0.5 - eps])[0] - step(m, [0.5 + eps])[0])
        assert gap <= 2.0 * abs(mu) * eps + 1e-15


class TestJacobian:
    def test_tent(self):
        assert jacobian(tent_map(1.5), [0.75]) == pytest.approx(np.array([[-1.5]]))

    def test_lozi(self):
        j = jacobian(lozi_map(1.68, 0.5), [0.4, 0.0])
        assert np.allclose(j, [[-1.68, 1.0], [0.5, 0.0]])

    def test_lozi_sign_at_border_matches_left_branch(self):
        j = jacobian(lozi_map(1.68, 0.5), [0.0, 0.0])
        assert j[0, 0] == pytest.approx(1.68)

    def test_pws3d_right_matrix_assembly(self):
        j = jacobian(pws3d_map(delta_r=-0.9), [1.0, 0.0, 0.0])
        expected = np.array([[0.8, 1.0, 0.0], [0.6, 0.0, 1.0], [-0.9, 0.0, 0.0]])
        assert np.array_equal(j, expected)

    @given(a=finite, b=finite, x=finite, y=finite)
    def test_lozi_determinant(self, a, b, x, y):
        j = jacobian(lozi_map(a, b), [x, y])
        assert np.linalg.det(j) == pytest.approx(-b, abs=1e-12)

    @given(dl=finite, dr=finite, x=finite)
    def test_pws3d_determinant_equals_delta(self, dl, dr, x):
        m = pws3d_map(delta_r=dr, delta_l=dl)
        j = jacobian(m, [x, 0.0, 0.0])
        expected = dl if x <= 0.0 else dr
        # cofactor expansion of the companion form gives det = delta exactly
        symbolic = j[0, 0] * 0.0 - 1.0 * (j[1, 0] * 0.0 - 1.0 * j[2, 0])
        assert symbolic == expected
        assert np.linalg.det(j) == pytest.approx(expected, abs=1e-12)


class TestLaneKernelAgreement:
    @settings(max_examples=25)
    @given(mu=finite, xs=st.lists(finite, min_size=1, max_size=8))
    def test_tent_lanes_match_scalar(self, mu, xs):
        m = tent_map(mu)
        lanes = step_lanes(m, np.array(xs))
        for x, got in zip(xs, lanes):
            assert got == step(m, [x])[0]

    def test_param_validation(self):
        with pytest.raises(ValueError):
            tent_map(float("inf"))
