"""JSON input/output.

Input schemas (all plain JSON):

quiver
    ``{"type": "A"|"D"|"E", "rank": n, "arrows": [[src, dst], ...]}``;
    ``arrows`` may be omitted for the default orientation.
automorphism
    ``{"tau": t, "sigma_shift": s, "diagram_auto": [perm] | null}``, or one of
    the short strings understood by ``parse_auto`` (``"tau"``, ``"cluster"``).
configuration
    ``{"orbit_reps": [[base, level], ...]}`` or ``"all"``.
module
    ``{"dims": {obj: n}, "matrices": {arrow: [[...]]}, "field": "Q"|"F2"|...}``
    where ``obj`` is an object index of the category and ``arrow`` a name
    from its Gabriel quiver (see ``present``).

Canonical form: keys sorted, no insignificant whitespace, UTF-8.  Every
reader here followed by the matching writer reproduces the canonical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import __version__
from .linalg import Field
from .mesh import SIGN_CONVENTION
from .quiver import AutoSpec, Configuration, DynkinQuiver, QuiverError, parse_auto


class InputError(QuiverError):
    """Malformed or inconsistent input file."""


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonicalize(text: str) -> str:
    return canonical(json.loads(text))


def load(src):
    """JSON from a path, a JSON string, or an already parsed object."""
    if isinstance(src, (dict, list)):
        return src
    if isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith(("{", "[", '"'))):
        p = Path(src)
        if not p.exists():
            # bare words such as "all" or "cluster"
            return src
        src = p.read_text()
    try:
        return json.loads(src)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None


def write(path, obj):
    text = canonical(obj)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")
    return text


# --------------------------------------------------------------------------
# readers
# --------------------------------------------------------------------------

def read_quiver(src) -> DynkinQuiver:
    d = load(src)
    if isinstance(d, str):
        return DynkinQuiver.parse(d)
    try:
        return DynkinQuiver.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad quiver: {e}") from None


def read_auto(src) -> AutoSpec:
    d = load(src)
    if isinstance(d, str):
        return parse_auto(d)
    try:
        return AutoSpec.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad automorphism: {e}") from None


def read_config(src) -> Configuration:
    d = load(src)
    try:
        return Configuration.from_json(d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad configuration: {e}") from None


def read_module(cat, src):
    from .reps import Representation

    d = load(src)
    tag = d.get("field")
    if tag is not None and Field.parse(tag) != cat.field:
        raise InputError(f"module over {tag} but category over {cat.field.name}")
    try:
        return Representation.from_json(cat, d)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad module: {e}") from None


def module_json(M) -> dict:
    """The module schema (category name dropped)."""
    d = M.to_json()
    return {"dims": d["dims"], "matrices": d["matrices"], "field": d["field"]}


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def report(command: str, seed: int, body: dict) -> dict:
    """Wrap a result with the tool version, the sign convention and the seed."""
    return {"tool": "nakajima", "version": __version__, "command": command,
            "seed": seed, "sign_convention": SIGN_CONVENTION, "result": body}
