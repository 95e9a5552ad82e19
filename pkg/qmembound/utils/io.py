"""CSV output, spectrum files and scenario files."""
import csv
import dataclasses
import logging
import math
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

from ..bound import Scenario
from ..lemma import FiniteSpectrum

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = ["energy", "degeneracy"]
SCENARIO_KEYS = {
    "mass_kg": float,
    "volume_m3": float,
    "energy_per_atom_eV": float,
    "atom_mass_amu": float,
    "dof_per_atom": int,
    "carrier_mass_kg": float,
}
OPTIONAL_SCENARIO_KEYS = {"carrier_mass_kg"}


def format_number(value) -> str:
    """17 significant digits, enough to read every double back exactly."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        assert len(row) == len(header), (row, header)
        writer.writerow([format_number(value) for value in row])


def read_spectrum(path: Union[str, Path]) -> FiniteSpectrum:
    """Spectrum file: CSV with header ``energy,degeneracy``, one level per row."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != SPECTRUM_HEADER:
            raise ValueError(f"{path}: expected header {','.join(SPECTRUM_HEADER)}, got {header}")
        levels = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{line}: expected 2 fields, got {len(row)}")
            try:
                energy, degeneracy = float(row[0]), float(row[1])
            except ValueError:
                raise ValueError(f"{path}:{line}: not a number: {row}") from None
            if not math.isfinite(energy) or not degeneracy.is_integer():
                raise ValueError(f"{path}:{line}: bad level {row}")
            levels.append((energy, int(degeneracy)))
    if not levels:
        raise ValueError(f"{path}: no levels")
    logger.debug("read %d levels from %s", len(levels), path)
    return FiniteSpectrum.from_levels(levels)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ValueError(f"{source}:{line_no}: expected key=value, got {raw!r}")
        if key not in SCENARIO_KEYS:
            raise ValueError(f"{source}:{line_no}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"{source}:{line_no}: duplicate key {key!r}")
        try:
            values[key] = SCENARIO_KEYS[key](value)
        except ValueError:
            raise ValueError(f"{source}:{line_no}: bad value for {key}: {value!r}") from None
    missing = set(SCENARIO_KEYS) - OPTIONAL_SCENARIO_KEYS - set(values)
    if missing:
        raise ValueError(f"{source}: missing keys {', '.join(sorted(missing))}")
    return Scenario(**values)


def read_scenario(path: Union[str, Path, None] = None) -> Scenario:
    if path is None:
        text = resources.files("qmembound").joinpath("data", "default_scenario.txt").read_text(encoding="utf-8")
        return parse_scenario(text, "default_scenario.txt")
    return parse_scenario(Path(path).read_text(encoding="utf-8"), str(path))


def scenario_lines(scenario: Scenario) -> Iterable[str]:
    for field in dataclasses.fields(scenario):
        yield f"{field.name}={format_number(getattr(scenario, field.name))}"
