# ================================================================================================
# 🧪 ASSEMBLY TESTS
# ================================================================================================

import numpy as np
import pytest

from funcint.domain.entities.mesh import (
    Constraint,
    Element,
    ElementKind,
    Mesh,
    Node,
    NodeSelector,
    build_dof_map,
    build_interval_mesh,
    uniform_interval_mesh,
)
from funcint.domain.exceptions import (
    DofMapMismatchException,
    NotAClosedDofException,
    SingularAfterBCException,
)
from funcint.domain.services.assembly import (
    assemble,
    assemble_sensitivity,
    energy,
    nodal_load_values,
)
from funcint.domain.services.elements import consistent_load, stiffness_line2


def _both_ends(left: float = 0.0, right: float = 0.0):
    return [
        Constraint(NodeSelector.point(0.0), 1, left),
        Constraint(NodeSelector.point(1.0), 1, right),
    ]


@pytest.mark.unit
class TestAssembleString:
    """🏗️ Cuerda con extremos prescritos."""

    def test_two_element_loaded_string(self, loaded_string_form):
        np.testing.assert_allclose(loaded_string_form.K, [[4.0]])
        np.testing.assert_allclose(loaded_string_form.b, [-0.5])
        assert loaded_string_form.c == pytest.approx(0.0)

    def test_prescribed_left_end_enters_b_and_c(self, two_element_mesh):
        # Given: u(0) = 1, u(1) = 0, f = 1
        dofmap = build_dof_map(two_element_mesh, 1, _both_ends(left=1.0))

        # When
        q = assemble(two_element_mesh, dofmap, 1.0, 1.0)

        # Then: b = K_oc u_bar - F_o = -2 - 0.5, c = 1/2 * 2 * 1 - 0.25
        np.testing.assert_allclose(q.b, [-2.5])
        assert q.c == pytest.approx(0.75)

    def test_sensitivity_example(self, two_element_mesh):
        dofmap = build_dof_map(two_element_mesh, 1, _both_ends(left=1.0))

        db, dc = assemble_sensitivity(two_element_mesh, dofmap, 1.0, None, (1, 1))

        np.testing.assert_allclose(db, [-2.0])
        assert dc == pytest.approx(2.0)

    def test_sensitivity_matches_finite_differences(self, rng):
        # Given: a non-uniform loaded string with both ends prescribed
        positions = [0.0, *np.sort(rng.uniform(0.0, 1.0, size=6)), 1.0]
        mesh = build_interval_mesh(1.0, positions)
        load = lambda x: 1.0 + x[0] ** 2
        u_right, eps = 0.3, 1e-6
        dofmap = build_dof_map(mesh, 1, _both_ends(left=0.2, right=u_right))
        right = mesh.node_at((1.0,))

        db, dc = assemble_sensitivity(mesh, dofmap, 2.0, load, (right, 1))
        plus = assemble(mesh, dofmap.with_closed_value(right, 1, u_right + eps), 2.0, load)
        minus = assemble(mesh, dofmap.with_closed_value(right, 1, u_right - eps), 2.0, load)

        # Then
        np.testing.assert_allclose(db, (plus.b - minus.b) / (2 * eps), atol=1e-6)
        assert dc == pytest.approx((plus.c - minus.c) / (2 * eps), abs=1e-6)

    def test_sensitivity_needs_closed_dof(self, two_element_mesh):
        dofmap = build_dof_map(two_element_mesh, 1, _both_ends())

        with pytest.raises(NotAClosedDofException):
            assemble_sensitivity(two_element_mesh, dofmap, 1.0, None, (2, 1))

    def test_energy_at_zero_is_constant_term(self, two_element_mesh):
        dofmap = build_dof_map(two_element_mesh, 1, _both_ends(left=1.0))
        q = assemble(two_element_mesh, dofmap, 1.0, 1.0)

        assert energy(q, [0.0]) == pytest.approx(q.c)


@pytest.mark.unit
class TestAssemblyStructure:

    def test_stiffness_is_tridiagonal_on_1d_mesh(self):
        mesh = uniform_interval_mesh(1.0, 10)
        q = assemble(mesh, build_dof_map(mesh, 1, _both_ends()), 1.0)

        assert np.count_nonzero(np.triu(q.K, 2)) == 0
        np.testing.assert_allclose(np.diag(q.K), 20.0)
        np.testing.assert_allclose(np.diag(q.K, 1), -10.0)

    def test_full_stiffness_equals_element_sum(self, rng):
        # Given: no constraints except one node so every (node, dof) pair is accounted for
        positions = [0.0, *np.sort(rng.uniform(0.0, 2.0, size=4)), 2.0]
        mesh = build_interval_mesh(2.0, positions)
        dofmap = build_dof_map(mesh, 1, [Constraint(NodeSelector.node(1), 1, 0.0)])
        sigma = rng.uniform(0.5, 2.0, size=len(mesh.domain_elements))

        q = assemble(mesh, dofmap, sigma)

        # Then: reference dense assembly over node ids 2..n
        n = len(positions)
        K_ref = np.zeros((n, n))
        for i, element in enumerate(mesh.domain_elements):
            a, b = (nid - 1 for nid in element.node_ids)
            K_ref[np.ix_([a, b], [a, b])] += stiffness_line2(sigma[i], positions[b] - positions[a])
        np.testing.assert_allclose(q.K, K_ref[1:, 1:], atol=1e-12)

    def test_node_renumbering_permutes_the_form(self):
        # Given: the same geometry with shuffled node ids
        positions = [0.0, 0.2, 0.5, 1.0]
        perm = {1: 3, 2: 1, 3: 4, 4: 2}
        nodes = tuple(Node(perm[i + 1], (x,)) for i, x in enumerate(positions))
        elements = tuple(Element(i + 1, ElementKind.LINE2, (perm[i + 1], perm[i + 2])) for i in range(3))
        shuffled = Mesh(nodes, elements, 1)
        plain = build_interval_mesh(1.0, positions)

        q_plain = assemble(plain, build_dof_map(plain, 1, _both_ends(right=1.0)), 1.0, 1.0)
        q_shuffled = assemble(shuffled, build_dof_map(shuffled, 1, _both_ends(right=1.0)), 1.0, 1.0)

        # Then: interior nodes 2,3 became ids 1,4, same order along x
        np.testing.assert_allclose(q_shuffled.K, q_plain.K)
        np.testing.assert_allclose(q_shuffled.b, q_plain.b)
        assert q_shuffled.c == pytest.approx(q_plain.c)

    def test_unconstrained_string_is_singular(self):
        mesh = uniform_interval_mesh(1.0, 3)

        with pytest.raises(SingularAfterBCException):
            assemble(mesh, build_dof_map(mesh, 1, []), 1.0)

    def test_dofmap_of_other_mesh_is_rejected(self):
        mesh = uniform_interval_mesh(1.0, 3)
        other = uniform_interval_mesh(1.0, 4)

        with pytest.raises(DofMapMismatchException):
            assemble(mesh, build_dof_map(other, 1, _both_ends()), 1.0)

    def test_hermite_mesh_needs_two_dofs_per_node(self):
        mesh = uniform_interval_mesh(1.0, 2, ElementKind.HERMITE_LINE2)

        with pytest.raises(DofMapMismatchException):
            assemble(mesh, build_dof_map(mesh, 1, _both_ends()), 1.0)

    def test_open_only_form_has_no_constant(self):
        mesh = uniform_interval_mesh(1.0, 4)
        q = assemble(mesh, build_dof_map(mesh, 1, _both_ends()), 1.0, 2.0)

        assert q.c == 0.0
        # interior node load: half of each neighbouring element
        np.testing.assert_allclose(q.b, -2.0 * consistent_load(ElementKind.LINE2, 0.25, [2.0, 2.0])[0])


@pytest.mark.unit
class TestNodalLoadValues:

    def test_constant_load(self, two_element_mesh):
        assert nodal_load_values(two_element_mesh, 2.0) == {1: 2.0, 2: 2.0, 3: 2.0}

    def test_callable_load(self, two_element_mesh):
        assert nodal_load_values(two_element_mesh, lambda x: x[0]) == {1: 0.0, 2: 0.5, 3: 1.0}

    def test_sequence_in_node_order(self, two_element_mesh):
        assert nodal_load_values(two_element_mesh, [1, 2, 3]) == {1: 1.0, 2: 2.0, 3: 3.0}

    def test_no_load(self, two_element_mesh):
        assert nodal_load_values(two_element_mesh, None) is None
