"""Reading and writing graphs, decompositions, embeddings and covers."""
from __future__ import annotations

from pathlib import Path

from .cover import DagCover, cover_from_json, cover_to_json
from .decomposition import TreeDecomposition, format_td, parse_td
from .exceptions import InputError, ParseError
from .graph import WeightedDigraph
from .planar.embedding import PlanarEmbedding, format_embedding, parse_embedding
from .planar.pathcover import PathCover, path_cover_from_json, path_cover_to_json


def format_graph(g: WeightedDigraph) -> str:
    """``n m`` header, then one ``tail head weight`` line per edge.

    Weights are written with ``repr`` so they read back bit-identical.
    """
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v} {w!r}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str, source: str = "<string>") -> WeightedDigraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if header is None:
                if len(parts) != 2:
                    raise ValueError("expected header 'n m'")
                header = (int(parts[0]), int(parts[1]))
                if header[0] < 0 or header[1] < 0:
                    raise ValueError("header counts must be non-negative")
                continue
            if len(parts) != 3:
                raise ValueError("expected 'tail head weight'")
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
            if not (0 <= u < header[0] and 0 <= v < header[0]):
                raise ValueError(f"edge ({u}, {v}) outside 0..{header[0] - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (w > 0 and w != float("inf")):
                raise ValueError(f"weight must be positive and finite, got {parts[2]}")
            edges.append((u, v, w))
        except ValueError as exc:
            raise ParseError(str(exc), source, lineno) from None
    if header is None:
        raise ParseError("missing 'n m' header", source)
    if len(edges) != header[1]:
        raise ParseError(f"header promises {header[1]} edges, found {len(edges)}", source)
    try:
        return WeightedDigraph(header[0], edges)
    except InputError as exc:
        raise ParseError(str(exc), source) from None


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", str(path)) from None


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def read_graph(path) -> WeightedDigraph:
    return parse_graph(_read(path), str(path))


def write_graph(path, g: WeightedDigraph) -> None:
    _write(path, format_graph(g))


def read_td(path) -> tuple[TreeDecomposition, int]:
    return parse_td(_read(path), str(path))


def write_td(path, td, n: int) -> None:
    _write(path, format_td(td, n))


def read_embedding(path) -> PlanarEmbedding:
    return parse_embedding(_read(path), str(path))


def write_embedding(path, emb: PlanarEmbedding) -> None:
    _write(path, format_embedding(emb))


def read_cover(path) -> DagCover:
    return cover_from_json(_read(path))


def write_cover(path, cover: DagCover) -> None:
    _write(path, cover_to_json(cover))


def read_path_cover(path) -> PathCover:
    return path_cover_from_json(_read(path))


def write_path_cover(path, pc: PathCover) -> None:
    _write(path, path_cover_to_json(pc))
