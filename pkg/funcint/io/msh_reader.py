# ================================================================================================
# 📄 MSH READER - Gmsh MSH 2.2 ASCII (nodos, elementos, etiquetas físicas)
# ================================================================================================
# Supported element codes: 1 (2-node line), 2 (3-node triangle), 15 (point,
# skipped). Unknown sections such as $PhysicalNames are skipped.

from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import structlog

from ..domain.entities.mesh import Element, ElementKind, Mesh, Node, triangle_signed_area
from ..domain.exceptions.funcint_exceptions import (
    DanglingNodeReferenceException,
    MalformedHeaderException,
    MeshParseException,
    UnsupportedElementTypeException,
    UnsupportedVersionException,
)

logger = structlog.get_logger(__name__)

LINE_CODE = 1
TRIANGLE_CODE = 2
POINT_CODE = 15
_NODES_PER_CODE = {LINE_CODE: 2, TRIANGLE_CODE: 3, POINT_CODE: 1}


class _Lines:
    """Cursor over non-blank lines that remembers 1-based line numbers."""

    def __init__(self, text: str):
        self._items: List[Tuple[int, str]] = [
            (i, line.strip()) for i, line in enumerate(text.splitlines(), start=1) if line.strip()
        ]
        self._pos = 0
        self.last_line = len(text.splitlines())

    def peek(self) -> Optional[Tuple[int, str]]:
        return self._items[self._pos] if self._pos < len(self._items) else None

    def next(self, expecting: str) -> Tuple[int, str]:
        item = self.peek()
        if item is None:
            raise MalformedHeaderException(f"unexpected end of file, expected {expecting}", self.last_line)
        self._pos += 1
        return item

    def __iter__(self) -> Iterator[Tuple[int, str]]:
        while self.peek() is not None:
            yield self.next("")


def _expect(lines: _Lines, marker: str) -> int:
    number, text = lines.next(marker)
    if text != marker:
        raise MalformedHeaderException(f"expected {marker}, found {text[:40]!r}", number)
    return number


def _ints(number: int, text: str, what: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise MeshParseException(f"malformed {what} line {text[:60]!r}", number) from None


def _read_format(lines: _Lines) -> None:
    first = lines.peek()
    if first is None or first[1] != "$MeshFormat":
        raise MalformedHeaderException("missing $MeshFormat", first[0] if first else 1)
    lines.next("$MeshFormat")
    number, text = lines.next("version line")
    tokens = text.split()
    if len(tokens) != 3:
        raise MalformedHeaderException(f"bad format line {text!r}", number)
    version, file_type, _ = tokens
    if version != "2.2":
        raise UnsupportedVersionException(version, number)
    if file_type != "0":
        raise UnsupportedVersionException(f"{version} binary", number)
    _expect(lines, "$EndMeshFormat")


def _read_count(lines: _Lines, what: str) -> int:
    number, text = lines.next(f"{what} count")
    values = _ints(number, text, f"{what} count")
    if len(values) != 1 or values[0] < 0:
        raise MeshParseException(f"bad {what} count {text!r}", number)
    return values[0]


def _read_nodes(lines: _Lines) -> Dict[int, Tuple[int, np.ndarray]]:
    nodes: Dict[int, Tuple[int, np.ndarray]] = {}
    for _ in range(_read_count(lines, "node")):
        number, text = lines.next("node line")
        tokens = text.split()
        try:
            node_id = int(tokens[0])
            xyz = np.array([float(t) for t in tokens[1:4]])
        except (ValueError, IndexError):
            raise MeshParseException(f"malformed node line {text[:60]!r}", number) from None
        if len(tokens) != 4:
            raise MeshParseException(f"node line needs id x y z, got {text[:60]!r}", number)
        if node_id in nodes:
            raise MeshParseException(f"duplicate node id {node_id}", number)
        nodes[node_id] = (number, xyz)
    _expect(lines, "$EndNodes")
    return nodes


def _read_elements(lines: _Lines) -> List[Tuple[int, int, int, Tuple[int, ...], Tuple[int, ...]]]:
    """(line number, element id, type code, tags, node ids) for every non-point element."""
    records = []
    for _ in range(_read_count(lines, "element")):
        number, text = lines.next("element line")
        values = _ints(number, text, "element")
        if len(values) < 3:
            raise MeshParseException(f"element line too short {text!r}", number)
        element_id, code, n_tags = values[:3]
        if code not in _NODES_PER_CODE:
            raise UnsupportedElementTypeException(code, number)
        n_nodes = _NODES_PER_CODE[code]
        if len(values) != 3 + n_tags + n_nodes:
            raise MeshParseException(
                f"element {element_id} of type {code} needs {n_tags} tags and {n_nodes} nodes", number
            )
        if code == POINT_CODE:
            continue
        tags = tuple(values[3:3 + n_tags])
        records.append((number, element_id, code, tags, tuple(values[3 + n_tags:])))
    _expect(lines, "$EndElements")
    return records


def _skip_section(lines: _Lines, number: int, name: str) -> None:
    end = "$End" + name[1:]
    for _, text in lines:
        if text == end:
            return
    raise MalformedHeaderException(f"section {name} is not closed by {end}", number)


def parse_msh(text: Union[str, bytes]) -> Mesh:
    """
    📄 Parse a Gmsh MSH 2.2 ASCII document into a Mesh.

    Triangles listed clockwise are reoriented, 1-D lines are stored with
    increasing x, nodes not used by any line or triangle are dropped. The
    mesh is 2-D when it holds at least one triangle, otherwise 1-D along x.

    Raises:
        MalformedHeaderException: missing or unclosed sections
        UnsupportedVersionException: not a 2.2 ASCII file
        MeshParseException: malformed lines, repeated element nodes, zero-length lines
        UnsupportedElementTypeException: element code outside {1, 2, 15}
        DanglingNodeReferenceException: element uses an unknown node
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    lines = _Lines(text)
    _read_format(lines)

    raw_nodes = None
    records = None
    for number, marker in lines:
        if marker == "$Nodes":
            raw_nodes = _read_nodes(lines)
        elif marker == "$Elements":
            records = _read_elements(lines)
        elif marker.startswith("$"):
            _skip_section(lines, number, marker)
        else:
            raise MalformedHeaderException(f"text outside any section {marker[:40]!r}", number)

    if raw_nodes is None:
        raise MalformedHeaderException("missing $Nodes section", lines.last_line)
    if records is None:
        raise MalformedHeaderException("missing $Elements section", lines.last_line)

    for number, element_id, _, _, node_ids in records:
        for node_id in node_ids:
            if node_id not in raw_nodes:
                raise DanglingNodeReferenceException(element_id, node_id, number)

    spatial_dim = 2 if any(code == TRIANGLE_CODE for _, _, code, _, _ in records) else 1
    used = {n for *_, node_ids in records for n in node_ids}

    nodes = []
    for node_id, (number, xyz) in raw_nodes.items():
        if node_id not in used:
            continue
        if spatial_dim == 1 and np.any(xyz[1:] != 0.0):
            raise MeshParseException("line-only meshes must lie on the x axis", number)
        nodes.append(Node(node_id, tuple(xyz[:spatial_dim])))
    dropped = sorted(set(raw_nodes) - used)
    if dropped:
        logger.warning("msh_orphan_nodes_dropped", count=len(dropped), first=dropped[:5])

    coords = {n.id: np.asarray(n.coords) for n in nodes}
    elements = []
    reoriented = 0
    for number, element_id, code, tags, node_ids in records:
        if len(set(node_ids)) != len(node_ids):
            raise MeshParseException(f"element {element_id} repeats a node", number)
        if code == TRIANGLE_CODE:
            area = triangle_signed_area(np.array([coords[n] for n in node_ids]))
            if area == 0.0:
                raise MeshParseException(f"triangle {element_id} has zero area", number)
            if area < 0.0:
                node_ids = (node_ids[0], node_ids[2], node_ids[1])
                reoriented += 1
            elements.append(Element(element_id, ElementKind.TRI3, node_ids, tags))
        else:
            if np.array_equal(coords[node_ids[0]], coords[node_ids[1]]):
                raise MeshParseException(f"line {element_id} has zero length", number)
            if spatial_dim == 1 and coords[node_ids[0]][0] > coords[node_ids[1]][0]:
                node_ids = (node_ids[1], node_ids[0])
                reoriented += 1
            elements.append(Element(element_id, ElementKind.LINE2, node_ids, tags))
    if reoriented:
        logger.info("msh_elements_reoriented", count=reoriented)

    return Mesh(tuple(nodes), tuple(elements), spatial_dim)


def read_msh(path: Union[str, Path]) -> Mesh:
    return parse_msh(Path(path).read_bytes())


def write_msh(mesh: Mesh) -> str:
    """Serialize ``mesh`` as MSH 2.2 ASCII; Hermite elements are written as plain lines."""
    out = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat", "$Nodes", str(len(mesh.nodes))]
    for node in mesh.nodes:
        xyz = list(node.coords) + [0.0] * (3 - len(node.coords))
        out.append(" ".join([str(node.id)] + [f"{v:.17g}" for v in xyz]))
    out += ["$EndNodes", "$Elements", str(len(mesh.elements))]
    for element in mesh.elements:
        code = TRIANGLE_CODE if element.kind is ElementKind.TRI3 else LINE_CODE
        fields = [element.id, code, len(element.tags), *element.tags, *element.node_ids]
        out.append(" ".join(str(v) for v in fields))
    out.append("$EndElements")
    return "\n".join(out) + "\n"
