"""Plain-text formats for instances, decompositions and solutions.

All formats are whitespace-separated ASCII with 0-based vertex indices. Blank lines
and lines whose first token is ``c`` are comments. Emission is canonical: edges and
terminal sets are sorted, so files are stable under a parse and emit round trip.

Instance::

    p gstp <n> <m> <t>
    e <u> <v>                   (m lines)
    s <d> <k> <v1> ... <vk>     (t lines)

Decomposition (``td`` bags may overlap, ``tcd`` bags must be disjoint)::

    p td|tcd <nodes> <root>
    b <node> <v> ...            (nodes without a b line have an empty bag)
    l <parent> <child>          (nodes - 1 lines)

Solution::

    p sol <parts>
    f <terminal-index> <u1> <v1> <u2> <v2> ...

A trailing ``FEASIBLE`` line is accepted, so the output of ``solve --witness`` is a
solution file as it stands.

Graph listings, used for augmented graphs, repeat ``e`` lines for parallel edges::

    p graph <n> <m>
    e <u> <v>                   (m lines)
"""
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from steinerpack.errors import FormatError
from steinerpack.graph import Edge, Graph, canonical_edge
from steinerpack.instances import GstpInstance, Part, Solution, make_part
from steinerpack.tree_cut import TreeCutDecomposition
from steinerpack.tree_decomposition import TreeDecomposition

logger = logging.getLogger(__name__)

Decomposition = Union[TreeDecomposition, TreeCutDecomposition]


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if tokens and tokens[0] != "c":
            yield number, tokens


def _integers(tokens: Sequence[str], number: int) -> List[int]:
    try:
        values = [int(token) for token in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got `{' '.join(tokens)}`", number) from None
    if any(value < 0 for value in values):
        raise FormatError("indices and counts must be nonnegative", number)
    return values


def _header(
    lines: Iterator[Tuple[int, List[str]]], kinds: Sequence[str], size: int
) -> Tuple[str, List[int], int]:
    first = next(lines, None)
    if first is None:
        raise FormatError("the text is empty")
    number, tokens = first
    if tokens[0] != "p" or len(tokens) < 2 or tokens[1] not in kinds:
        raise FormatError(f"expected a `p {'|'.join(kinds)}` header first", number)
    if len(tokens) != size + 2:
        raise FormatError(f"the header needs {size} numbers", number)
    return tokens[1], _integers(tokens[2:], number), number


def parse_instance(text: str) -> GstpInstance:
    lines = _lines(text)
    _, (n, m, t), _ = _header(lines, ["gstp"], 3)
    edges: Set[Edge] = set()
    sets: List[List[int]] = []
    demands: List[int] = []
    last = 0
    for number, tokens in lines:
        last = number
        values = _integers(tokens[1:], number)
        if tokens[0] == "e":
            if len(values) != 2:
                raise FormatError("an edge line needs two endpoints", number)
            u, v = values
            if u >= n or v >= n:
                raise FormatError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}", number)
            if u == v:
                raise FormatError(f"loop at vertex {u}", number)
            if canonical_edge(u, v) in edges:
                raise FormatError(f"duplicate edge ({u}, {v})", number)
            edges.add(canonical_edge(u, v))
        elif tokens[0] == "s":
            if len(values) < 2 or len(values) != values[1] + 2:
                raise FormatError("a terminal line is `s <d> <k>` followed by k vertices", number)
            demand, members = values[0], values[2:]
            if demand < 1:
                raise FormatError("demands must be at least 1", number)
            if any(v >= n for v in members):
                raise FormatError(f"terminal vertex outside 0..{n - 1}", number)
            sets.append(members)
            demands.append(demand)
        else:
            raise FormatError(f"unknown line type `{tokens[0]}`", number)
    if len(edges) != m:
        raise FormatError(f"the header announces {m} edges, found {len(edges)}", last or None)
    if len(sets) != t:
        raise FormatError(
            f"the header announces {t} terminal sets, found {len(sets)}", last or None
        )
    return GstpInstance(Graph(n, edges), sets, demands)


def format_instance(inst: GstpInstance, comment: Optional[str] = None) -> str:
    g = inst.graph
    lines = [] if comment is None else [f"c {comment}"]
    lines.append(f"p gstp {g.vertex_count} {g.edge_count} {len(inst.terminal_sets)}")
    lines += [f"e {u} {v}" for u, v in g.edge_list()]
    for terminal_set, demand in inst.items():
        members = " ".join(str(v) for v in sorted(terminal_set))
        lines.append(f"s {demand} {len(terminal_set)} {members}".rstrip())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parses a ``p graph <n> <m>`` listing; repeated ``e`` lines are parallel edges."""
    lines = _lines(text)
    _, (n, m), _ = _header(lines, ["graph"], 2)
    edges: List[Edge] = []
    last = 0
    for number, tokens in lines:
        last = number
        if tokens[0] != "e":
            raise FormatError(f"unknown line type `{tokens[0]}`", number)
        values = _integers(tokens[1:], number)
        if len(values) != 2:
            raise FormatError("an edge line needs two endpoints", number)
        u, v = values
        if u >= n or v >= n:
            raise FormatError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}", number)
        if u == v:
            raise FormatError(f"loop at vertex {u}", number)
        edges.append(canonical_edge(u, v))
    if len(edges) != m:
        raise FormatError(f"the header announces {m} edges, found {len(edges)}", last or None)
    return Graph(n, edges, multigraph=len(set(edges)) < len(edges))


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {comment}" for comment in comments]
    lines.append(f"p graph {g.vertex_count} {g.edge_count}")
    lines += [f"e {u} {v}" for u, v in g.edge_list()]
    return "\n".join(lines) + "\n"


def parse_host_graph(text: str) -> Graph:
    """The graph of an instance file or of a ``p graph`` listing."""
    _, header = next(_lines(text), (0, []))
    if header[:2] == ["p", "graph"]:
        return parse_graph(text)
    return parse_instance(text).graph


def parse_decomposition(text: str, g: Optional[Graph] = None) -> Decomposition:
    """Parses a ``td`` or ``tcd`` file, validating it against ``g`` when given."""
    lines = _lines(text)
    kind, (nodes, root), header = _header(lines, ["td", "tcd"], 2)
    if root >= nodes:
        raise FormatError(f"root {root} is not one of the {nodes} nodes", header)
    bags: Dict[int, List[int]] = {}
    parent: List[Optional[int]] = [None] * nodes
    links = 0
    for number, tokens in lines:
        values = _integers(tokens[1:], number)
        if tokens[0] == "b":
            if not values or values[0] >= nodes:
                raise FormatError("a bag line starts with a node index", number)
            if values[0] in bags:
                raise FormatError(f"node {values[0]} has two bag lines", number)
            bags[values[0]] = values[1:]
        elif tokens[0] == "l":
            if len(values) != 2 or max(values) >= nodes:
                raise FormatError("a link line is `l <parent> <child>` over existing nodes", number)
            p, child = values
            if child == root or parent[child] is not None:
                raise FormatError(f"node {child} gets a second parent", number)
            parent[child] = p
            links += 1
        else:
            raise FormatError(f"unknown line type `{tokens[0]}`", number)
    if links != nodes - 1:
        raise FormatError(f"a tree on {nodes} nodes needs {nodes - 1} links, found {links}")
    try:
        decomposition: Decomposition
        if kind == "td":
            decomposition = TreeDecomposition(parent, [bags.get(t, []) for t in range(nodes)])
        else:
            decomposition = TreeCutDecomposition(parent, [bags.get(t, []) for t in range(nodes)])
        if g is not None:
            decomposition.validate(g)
    except ValueError as error:
        raise FormatError(str(error)) from None
    return decomposition


def format_decomposition(decomposition: Decomposition) -> str:
    kind = "td" if isinstance(decomposition, TreeDecomposition) else "tcd"
    lines = [f"p {kind} {decomposition.node_count} {decomposition.root}"]
    for t, bag in enumerate(decomposition.bags):
        lines.append(" ".join(["b", str(t)] + [str(v) for v in sorted(bag)]))
    for t, p in enumerate(decomposition.parent):
        if p is not None:
            lines.append(f"l {p} {t}")
    return "\n".join(lines) + "\n"


def format_parts(solution: Sequence[Part]) -> List[str]:
    """One ``f`` line per part, in canonical order."""
    lines = []
    ordered = sorted(solution, key=lambda part: (part.terminal_index, sorted(part.edges)))
    for edges, index in ordered:
        endpoints = " ".join(f"{u} {v}" for u, v in sorted(edges))
        lines.append(f"f {index} {endpoints}".rstrip())
    return lines


def format_solution(solution: Sequence[Part]) -> str:
    return "\n".join([f"p sol {len(solution)}"] + format_parts(solution)) + "\n"


def parse_solution(text: str) -> Solution:
    lines = _lines(text)
    _, (count,), _ = _header(lines, ["sol"], 1)
    parts: Solution = []
    for number, tokens in lines:
        if tokens == ["FEASIBLE"]:
            continue
        if tokens[0] != "f":
            raise FormatError(f"unknown line type `{tokens[0]}`", number)
        values = _integers(tokens[1:], number)
        if not values or len(values) % 2 != 1:
            raise FormatError(
                "a part line is `f <terminal-index>` followed by edge endpoints", number
            )
        index, endpoints = values[0], values[1:]
        parts.append(make_part(zip(endpoints[::2], endpoints[1::2]), index))
    if len(parts) != count:
        raise FormatError(f"the header announces {count} parts, found {len(parts)}")
    return parts


def load_instance(path: str) -> GstpInstance:
    with open(path) as handle:
        inst = parse_instance(handle.read())
    logger.debug("loaded %r from %s", inst, path)
    return inst


def load_decomposition(path: str, g: Optional[Graph] = None) -> Decomposition:
    with open(path) as handle:
        return parse_decomposition(handle.read(), g)


def load_solution(path: str) -> Solution:
    with open(path) as handle:
        return parse_solution(handle.read())
