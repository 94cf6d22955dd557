"""Spectrum JSON and truth-table text formats.

Spectrum JSON::

    {"n": 3, "coefficients": [{"subset": [1], "value": 0.5}, ...]}

Truth table: a header line ``n=<int>`` followed by 2^n whitespace-separated
floats in row order.
"""

from __future__ import annotations

import json
from typing import Any, TextIO

import numpy as np

from boolcube.cube import BooleanFunction, FourierSpectrum, mask_to_subset, subset_to_mask


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def spectrum_to_dict(s: FourierSpectrum) -> dict[str, Any]:
    return {
        "n": s.n,
        "coefficients": [
            {"subset": mask_to_subset(m), "value": v} for m, v in sorted(s.coeffs.items())
        ],
    }


def spectrum_from_dict(data: dict[str, Any]) -> FourierSpectrum:
    try:
        n = int(data["n"])
        entries = data["coefficients"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"spectrum JSON needs 'n' and 'coefficients': {exc}") from None
    coeffs: dict[int, float] = {}
    for k, entry in enumerate(entries):
        subset = entry["subset"]
        if list(subset) != sorted(set(subset)) or any(not 1 <= int(i) <= n for i in subset):
            raise FormatError(f"coefficient {k}: subset {subset} must be ascending within 1..{n}")
        mask = subset_to_mask(subset)
        if mask in coeffs:
            raise FormatError(f"coefficient {k}: duplicate subset {subset}")
        coeffs[mask] = float(entry["value"])
    return FourierSpectrum(n, coeffs)


def dump_spectrum(s: FourierSpectrum) -> str:
    return json.dumps(spectrum_to_dict(s))


def load_spectrum(text: str) -> FourierSpectrum:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from None
    return spectrum_from_dict(data)


def dump_table(f: BooleanFunction) -> str:
    body = "\n".join(format(v, ".17g") for v in f.values)
    return f"n={f.n}\n{body}\n"


def load_table(text: str) -> BooleanFunction:
    n = None
    values: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if n is None:
            if not stripped.startswith("n="):
                raise FormatError("expected header 'n=<int>'", lineno)
            try:
                n = int(stripped[2:])
            except ValueError:
                raise FormatError(f"bad dimension {stripped[2:]!r}", lineno) from None
            continue
        for token in stripped.split():
            try:
                values.append(float(token))
            except ValueError:
                raise FormatError(f"not a number: {token!r}", lineno) from None
    if n is None:
        raise FormatError("empty truth table")
    if len(values) != 1 << n:
        raise FormatError(f"expected {1 << n} values for n={n}, found {len(values)}")
    return BooleanFunction(n, np.array(values))


def read_table(fh: TextIO) -> BooleanFunction:
    return load_table(fh.read())
