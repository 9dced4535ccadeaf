"""Network text and JSON formats.

Text format::

    # comment
    n 4
    0:1,2:3
    0:2,1:3
    1:2

One layer per line, comparators as 0-indexed ``low:high`` pairs.
"""
from __future__ import annotations

import json
from typing import TextIO

from sortnet.core import Layer, Network, check


class NetworkFormatError(ValueError):
    pass


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_text(text: str) -> Network:
    n = None
    layers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
                raise NetworkFormatError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            n = int(parts[1])
            continue
        pairs = []
        for item in line.replace(" ", "").split(","):
            try:
                a, b = item.split(":")
                pairs.append((int(a), int(b)))
            except ValueError:
                raise NetworkFormatError(f"line {lineno}: bad comparator {item!r}") from None
        layers.append(Layer.of(pairs))
    if n is None:
        raise NetworkFormatError("missing 'n <count>' header")
    net = Network(n, tuple(layers))
    try:
        return check(net)
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from None


def format_text(network: Network, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n {network.n}")
    for layer in network.layers:
        lines.append(",".join(f"{c.low}:{c.high}" for c in layer))
    return "\n".join(lines) + "\n"


def to_json(network: Network) -> dict:
    return {"n": network.n, "layers": network.as_lists()}


def from_json(data: dict) -> Network:
    try:
        net = Network.from_layers(int(data["n"]), data["layers"])
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFormatError(f"bad network JSON: {exc}") from None
    try:
        return check(net)
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from None


def loads(text: str) -> Network:
    """Parse either format, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"bad JSON: {exc}") from None
        return from_json(data)
    return parse_text(text)


def load(fp: TextIO) -> Network:
    return loads(fp.read())


def read(path: str) -> Network:
    with open(path) as fp:
        return load(fp)


def write(network: Network, path: str, comment: str | None = None) -> None:
    with open(path, "w") as fp:
        fp.write(format_text(network, comment))
