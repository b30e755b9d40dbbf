"""Loading and writing surface description files (dotenv-style KEY=VALUE)."""

import logging
import re
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Optional, Union

from dotenv import dotenv_values

from .errors import ParseError, SurfaceConfigError
from .lattice import SurfaceLattice, hyperplane_lattice
from .parsing import parse_class, parse_rational

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).parent / "surfaces"
PROJECTIVE_SPACE = re.compile(r"p([1-9][0-9]*)")
PRESETS = {
    "p2": PRESET_DIR / "p2.env",
    "p2-double-blowup": PRESET_DIR / "p2-double-blowup.env",
}


def load_surface(source: Union[str, Path]) -> SurfaceLattice:
    """
    Load a surface from a preset name or a file path.

    Args:
        source: "p2", "p2-double-blowup", "pN" for the rank-one lattice of P^N,
            or a path to a surface file

    Returns:
        Validated SurfaceLattice
    """
    if str(source) in PRESETS:
        return _load_preset(str(source))
    match = PROJECTIVE_SPACE.fullmatch(str(source))
    if match and not Path(source).is_file():
        return hyperplane_lattice(int(match.group(1)))

    path = Path(source)
    if not path.is_file():
        raise SurfaceConfigError(
            f"Unknown surface {source!r}: not a preset ({', '.join(PRESETS)}) and not a file"
        )
    return parse_surface_config(dotenv_values(path, interpolate=False), origin=str(path))


@lru_cache(maxsize=None)
def _load_preset(name: str) -> SurfaceLattice:
    logger.info("Loading preset surface %s", name)
    return parse_surface_config(dotenv_values(PRESETS[name], interpolate=False), origin=name)


def _require(values: Mapping[str, Optional[str]], key: str, origin: str) -> str:
    value = values.get(key)
    if value is None or not value.strip():
        raise SurfaceConfigError(f"{origin}: missing required key {key}")
    return value.strip()


def _split(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_surface_config(values: Mapping[str, Optional[str]], origin: str = "<config>") -> SurfaceLattice:
    """Build a lattice from the parsed KEY=VALUE pairs of a surface file."""
    name = _require(values, "NAME", origin)
    basis = _split(_require(values, "BASIS", origin))

    try:
        gram = []
        for label in basis:
            row = [parse_rational(x) for x in _split(_require(values, f"GRAM_{label}", origin))]
            if len(row) != len(basis):
                raise SurfaceConfigError(
                    f"{origin}: GRAM_{label} has {len(row)} entries, expected {len(basis)}"
                )
            gram.append(row)

        aliases = {}
        for item in _split(values.get("ALIASES") or ""):
            alias, sep, label = item.partition(":")
            if not sep or label.strip() not in basis:
                raise SurfaceConfigError(f"{origin}: bad alias entry {item!r} (expected alias:label)")
            aliases[alias.strip()] = label.strip()

        # Classes are parsed against a provisional lattice carrying basis, gram and aliases only
        provisional = SurfaceLattice(name, basis, gram, aliases=aliases, validate=False)

        named = {}
        for key, value in values.items():
            if key.startswith("NAMED_") and value:
                named[key[len("NAMED_"):]] = parse_class(value, provisional).coeffs
        # curve, Mori and polarization entries may refer to the named classes
        provisional = SurfaceLattice(name, basis, gram, aliases=aliases, named_classes=named, validate=False)

        curves = [
            (key[len("CURVE_"):], parse_class(value, provisional).coeffs)
            for key, value in values.items()
            if key.startswith("CURVE_") and value
        ]
        generators = [parse_class(item, provisional).coeffs
                      for item in _split(_require(values, "MORI", origin))]
        polarization = parse_class(_require(values, "POLARIZATION", origin), provisional).coeffs
    except ParseError as e:
        raise SurfaceConfigError(f"{origin}: {e}") from e

    lattice = SurfaceLattice(
        name, basis, gram, curves, generators, polarization,
        aliases=aliases, named_classes=named,
    )
    logger.info("Loaded surface %s from %s", name, origin)
    return lattice


def dump_surface_config(lattice: SurfaceLattice) -> str:
    """Serialise a lattice back to the surface file format."""
    lines = [f"NAME={lattice.name}", f"BASIS={','.join(lattice.basis_labels)}"]
    for i, label in enumerate(lattice.basis_labels):
        lines.append(f"GRAM_{label}={','.join(str(x) for x in lattice.gram.row(i))}")
    if lattice.aliases:
        lines.append('ALIASES="' + ",".join(f"{a}:{b}" for a, b in lattice.aliases.items()) + '"')
    for record in lattice.curve_catalog:
        lines.append(f"CURVE_{record.label}={record.divisor}")
    lines.append(f"MORI={','.join(str(g) for g in lattice.mori_generators)}")
    lines.append(f"POLARIZATION={lattice.polarization}")
    for key, value in lattice.named_classes.items():
        lines.append(f"NAMED_{key}={value}")
    return "\n".join(lines) + "\n"
