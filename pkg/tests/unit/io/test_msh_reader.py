# ================================================================================================
# 🧪 MSH READER TESTS
# ================================================================================================

import pytest

from funcint.domain.entities.mesh import ElementKind
from funcint.domain.exceptions import (
    DanglingNodeReferenceException,
    MalformedHeaderException,
    MeshParseException,
    UnsupportedElementTypeException,
    UnsupportedVersionException,
)
from funcint.domain.services.models.membrane2d import unit_square_mesh
from funcint.io.msh_reader import parse_msh, read_msh, write_msh

HEADER = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"


def _msh(nodes: str, elements: str, header: str = HEADER) -> str:
    node_lines = nodes.strip().splitlines()
    element_lines = elements.strip().splitlines()
    return (
        header
        + f"$Nodes\n{len(node_lines)}\n" + "\n".join(node_lines) + "\n$EndNodes\n"
        + f"$Elements\n{len(element_lines)}\n" + "\n".join(element_lines) + "\n$EndElements\n"
    )


@pytest.mark.unit
class TestReadSamples:
    """📄 Ficheros de ejemplo en samples/."""

    def test_line_mesh(self, samples_dir):
        mesh = read_msh(samples_dir / "line.msh")

        assert mesh.spatial_dim == 1
        assert len(mesh.nodes) == 4
        assert mesh.element_counts() == {"line2": 3}
        assert mesh.h == pytest.approx(0.5)

    def test_line_mesh_reorients_reversed_element(self, samples_dir):
        mesh = read_msh(samples_dir / "line.msh")

        reversed_element = next(e for e in mesh.elements if e.id == 6)

        assert reversed_element.node_ids == (3, 4)
        assert reversed_element.physical == 10

    def test_square_mesh(self, samples_dir):
        mesh = read_msh(samples_dir / "square.msh")

        assert mesh.spatial_dim == 2
        assert len(mesh.nodes) == 5
        assert mesh.element_counts() == {"line2": 4, "tri3": 4}
        assert mesh.measure() == pytest.approx(1.0)
        assert mesh.nodes_in_group(1) == (1, 2, 3, 4)

    def test_square_mesh_reorients_clockwise_triangle(self, samples_dir):
        mesh = read_msh(samples_dir / "square.msh")

        triangle = next(e for e in mesh.elements if e.id == 11)

        assert triangle.node_ids == (4, 5, 3)

    def test_unsupported_element_reports_line(self, samples_dir):
        with pytest.raises(UnsupportedElementTypeException) as exc_info:
            read_msh(samples_dir / "unsupported.msh")

        assert exc_info.value.code == 3
        assert exc_info.value.line_number == 14
        assert "line 14" in exc_info.value.message


@pytest.mark.unit
class TestParseErrors:

    def test_empty_document(self):
        with pytest.raises(MalformedHeaderException) as exc_info:
            parse_msh("")

        assert exc_info.value.line_number == 1

    def test_version_four_is_rejected(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 2", header="$MeshFormat\n4.1 0 8\n$EndMeshFormat\n")

        with pytest.raises(UnsupportedVersionException) as exc_info:
            parse_msh(text)

        assert exc_info.value.line_number == 2

    def test_only_version_two_point_two_is_read(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 2", header="$MeshFormat\n2.1 0 8\n$EndMeshFormat\n")

        with pytest.raises(UnsupportedVersionException) as exc_info:
            parse_msh(text)

        assert exc_info.value.line_number == 2

    def test_binary_file_is_rejected(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 2", header="$MeshFormat\n2.2 1 8\n$EndMeshFormat\n")

        with pytest.raises(UnsupportedVersionException):
            parse_msh(text)

    def test_missing_elements_section(self):
        text = HEADER + "$Nodes\n1\n1 0 0 0\n$EndNodes\n"

        with pytest.raises(MalformedHeaderException):
            parse_msh(text)

    def test_dangling_node_reference(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 3")

        with pytest.raises(DanglingNodeReferenceException) as exc_info:
            parse_msh(text)

        assert exc_info.value.node_id == 3

    def test_malformed_node_line(self):
        text = _msh("1 0 zero 0\n2 1 0 0", "1 1 0 1 2")

        with pytest.raises(MeshParseException) as exc_info:
            parse_msh(text)

        assert exc_info.value.line_number == 6

    def test_repeated_element_node_reports_line(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 2\n2 1 0 2 2")

        with pytest.raises(MeshParseException) as exc_info:
            parse_msh(text)

        assert exc_info.value.line_number == 12
        assert "repeats a node" in str(exc_info.value)

    def test_zero_length_line_reports_line(self):
        # Given: nodes 2 and 3 share x = 1
        text = _msh("1 0 0 0\n2 1 0 0\n3 1 0 0", "1 1 0 1 2\n2 1 0 2 3")

        with pytest.raises(MeshParseException) as exc_info:
            parse_msh(text)

        assert exc_info.value.line_number == 13

    def test_line_mesh_off_axis(self):
        text = _msh("1 0 0 0\n2 1 0.5 0", "1 1 0 1 2")

        with pytest.raises(MeshParseException):
            parse_msh(text)

    def test_unknown_sections_are_skipped(self):
        text = _msh("1 0 0 0\n2 1 0 0", "1 1 0 1 2").replace(
            "$Nodes", "$Comments\nanything goes here\n$EndComments\n$Nodes", 1
        )

        assert len(parse_msh(text).nodes) == 2

    def test_bytes_input(self):
        assert parse_msh(_msh("1 0 0 0\n2 2 0 0", "1 1 0 1 2").encode()).h == pytest.approx(2.0)


@pytest.mark.unit
class TestWriteMsh:

    def test_written_square_reads_back_with_same_structure(self):
        mesh = unit_square_mesh(3)

        again = parse_msh(write_msh(mesh))

        assert again.element_counts() == mesh.element_counts()
        assert again.nodes_in_group(1) == mesh.nodes_in_group(1)
        assert again.measure() == pytest.approx(1.0)

    def test_hermite_elements_are_written_as_lines(self, samples_dir):
        mesh = read_msh(samples_dir / "line.msh").with_kind(ElementKind.HERMITE_LINE2)

        again = parse_msh(write_msh(mesh))

        assert again.domain_kind is ElementKind.LINE2
