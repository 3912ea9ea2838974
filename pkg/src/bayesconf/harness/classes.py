"""Named model classes and the INI class-file format.

A class file has a ``[class]`` section with either a ``preset`` key or a
``models`` key listing one model per line, plus optional ``prior`` and
``truth`` keys::

    [class]
    models =
        bernoulli 0.25
        lebesgue 2
        all-ones
        ones-then-zeros 3
        categorical 0.2 0.3 0.5
    prior = uniform        # or whitespace/comma separated weights
    truth = 0

Presets: ``appendix`` (41 coins, theta = k/40, truth k=20), ``uniform21``
(21 coins, theta = k/20, truth k=10), ``fix-a`` (ones-then-zeros k=0..3,
truth k=3), ``fix-c`` (Lebesgue and all-ones, truth Lebesgue), ``single``
(one fair coin), and ``bernoulli-grid-N`` for any N >= 2.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass
from pathlib import Path

from ..measures import AllOnes, BernoulliMeasure, CategoricalIID, Lebesgue, Measure, OnesThenZeros
from ..mixture import ModelClass

__all__ = ["ClassSpec", "resolve_class", "parse_class_file", "bernoulli_grid", "PRESETS"]


@dataclass(frozen=True)
class ClassSpec:
    name: str
    model_class: ModelClass
    truth: int


def bernoulli_grid(size: int) -> ModelClass:
    """``size`` coins with parameters ``k / (size - 1)`` and a uniform prior."""
    if size < 2:
        raise ValueError("a Bernoulli grid needs at least two models")
    return ModelClass([BernoulliMeasure(k / (size - 1)) for k in range(size)])


def _grid_spec(name, size):
    return ClassSpec(name, bernoulli_grid(size), (size - 1) // 2)


PRESETS = {
    "appendix": lambda: _grid_spec("appendix", 41),
    "uniform21": lambda: _grid_spec("uniform21", 21),
    "fix-a": lambda: ClassSpec("fix-a", ModelClass([OnesThenZeros(k) for k in range(4)]), 3),
    "fix-c": lambda: ClassSpec("fix-c", ModelClass([Lebesgue(2), AllOnes()]), 0),
    "single": lambda: ClassSpec("single", ModelClass([BernoulliMeasure(0.5)]), 0),
}


def _parse_model(line: str) -> Measure:
    parts = line.split()
    kind, args = parts[0].lower(), parts[1:]
    try:
        if kind == "bernoulli":
            (theta,) = args
            return BernoulliMeasure(float(theta))
        if kind == "lebesgue":
            return Lebesgue(int(args[0]) if args else 2)
        if kind == "all-ones":
            if args:
                raise ValueError
            return AllOnes()
        if kind == "ones-then-zeros":
            (k,) = args
            return OnesThenZeros(int(k))
        if kind == "categorical":
            return CategoricalIID([float(x) for x in args])
    except ValueError as exc:
        raise ValueError(f"bad arguments for model line {line!r}") from exc
    raise ValueError(f"unknown model family {kind!r}")


def parse_class_file(path: str | Path) -> ClassSpec:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        parser.read_file(fh)
    if not parser.has_section("class"):
        raise ValueError(f"{path}: missing [class] section")
    sec = parser["class"]
    if "preset" in sec:
        spec = resolve_class(sec["preset"])
        truth = sec.getint("truth", spec.truth)
        return ClassSpec(Path(path).stem, spec.model_class, truth)
    lines = [ln.strip() for ln in sec.get("models", "").splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: no models listed")
    models = [_parse_model(ln) for ln in lines]
    prior_text = sec.get("prior", "uniform").strip()
    prior = None if prior_text == "uniform" else [float(x) for x in re.split(r"[\s,]+", prior_text) if x]
    truth = sec.getint("truth", 0)
    mc = ModelClass(models, prior)
    if not 0 <= truth < mc.size:
        raise ValueError(f"{path}: truth index {truth} out of range")
    return ClassSpec(Path(path).stem, mc, truth)


def resolve_class(name: str) -> ClassSpec:
    """A preset name, ``bernoulli-grid-N``, or a path to a class file."""
    if name in PRESETS:
        return PRESETS[name]()
    m = re.fullmatch(r"bernoulli-grid-(\d+)", name)
    if m:
        return _grid_spec(name, int(m.group(1)))
    if Path(name).is_file():
        return parse_class_file(name)
    raise ValueError(f"unknown class {name!r} (presets: {', '.join(PRESETS)}, bernoulli-grid-N, or a file)")
