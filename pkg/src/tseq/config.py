"""Experiment configuration documents and sequence presets.

A config is ``{"experiment": id, "params": {...}, "output": {"path": ..., "format": ...}}``.
Integers are written as decimal strings and fractions as ``"p/q"``; plain JSON
numbers are accepted on input for integers only.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import seqs
from .seqs import IntSeq, SeqError, parse_fraction

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "EXPERIMENTS",
    "load_config",
    "parse_int",
    "seq_from_spec",
]


class ConfigError(ValueError):
    def __init__(self, msg: str, field_name: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field_name is not None:
            where.append(f"field '{field_name}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.field = field_name
        self.line = line


# experiment id -> (required params, optional params with defaults)
EXPERIMENTS: dict[str, tuple[set[str], dict[str, Any]]] = {
    "thm1-track": ({"base", "f", "N"}, {"eps": "default", "level_cap": "64"}),
    "thm1-gaps": ({"seq", "N", "window"}, {"c_grid": None}),
    "thm2-ring": ({"r", "N"}, {"witnesses": "1"}),
    "thm3-subgroup": ({"n0", "count"}, {}),
    "thm5-sup": ({"a", "b", "g", "N"}, {}),
    "thm6-tau": (set(), {"mode": "ball-cap", "n0": None, "window": None, "n": None, "slots": None, "count": "1"}),
    "thm4-amalgam": ({"c"}, {"mode": "check", "bound": None, "a": None, "N": None}),
    "nbhd-member": ({"seq", "x", "slots"}, {"depth_cap": "8", "index_cap": None}),
}

FORMATS = ("json", "csv")


def parse_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError("expected an integer", name)
    if isinstance(value, int):
        return value
    if isinstance(value, str) and re.fullmatch(r"\s*[+-]?\d+\s*", value):
        return int(value)
    raise ConfigError(f"expected a decimal integer string, got {value!r}", name)


def parse_frac(value: Any, name: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_fraction(value)
        except SeqError as exc:
            raise ConfigError(str(exc), name) from None
    raise ConfigError(f"expected a fraction string, got {value!r}", name)


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}", "experiment")
        required, optional = EXPERIMENTS[self.experiment]
        unknown = set(self.params) - required - set(optional)
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", "params")
        missing = required - set(self.params)
        if missing:
            raise ConfigError(f"missing keys {sorted(missing)}", "params")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}", "output.format")

    def get(self, key: str):
        if key in self.params:
            return self.params[key]
        return EXPERIMENTS[self.experiment][1].get(key)

    @classmethod
    def from_dict(cls, doc: Any) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - {"experiment", "params", "output"}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}")
        if "experiment" not in doc:
            raise ConfigError("missing", "experiment")
        out = doc.get("output", {}) or {}
        if not isinstance(out, dict) or set(out) - {"path", "format"}:
            raise ConfigError("output must be an object with 'path' and 'format'", "output")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("params must be an object", "params")
        return cls(doc["experiment"], dict(params), out.get("path"), out.get("format", "json"))

    def to_dict(self) -> dict:
        doc: dict = {"experiment": self.experiment, "params": _canon(self.params)}
        out = {"format": self.output_format}
        if self.output_path is not None:
            out["path"] = self.output_path
        doc["output"] = out
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _canon(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {k: _canon(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canon(v) for v in value]
    return value


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    try:
        return ExperimentConfig.from_dict(doc)
    except ConfigError as exc:
        if exc.field and exc.line is None:
            line = _find_line(text, exc.field.split(".")[-1])
            if line is not None:
                raise ConfigError(str(exc), line=line) from None
        raise


def _find_line(text: str, key: str) -> int | None:
    for no, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return no
    return None


# ---------------------------------------------------------------------------
# sequence presets

_CALL = re.compile(r"\s*([a-z0-9]+)\s*\((.*)\)\s*$", re.S)


def _split_args(text: str) -> list[str]:
    args, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            args.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        args.append(cur)
    return [a.strip() for a in args]


def seq_from_spec(spec: Any, name: str = "seq") -> IntSeq:
    """Build an :class:`IntSeq` from a preset description.

    Strings: ``"pow2"``, ``"pow(3/2)"``, ``"thm2(3/2)"``, ``"shifted(pow2, 1)"``
    or a closed-form expression in n such as ``"2^n+1"``.  Objects:
    ``{"preset": "pow", "r": "3/2"}``, ``{"preset": "shifted", "base": ..., "c": "1"}``,
    ``{"preset": "table", "values": [...], "start": "1"}``.
    """
    try:
        if isinstance(spec, dict):
            return _seq_from_dict(spec, name)
        if not isinstance(spec, str):
            raise ConfigError(f"expected a sequence description, got {spec!r}", name)
        text = spec.strip()
        if text == "pow2":
            return seqs.pow2()
        if text == "e":
            raise ConfigError("'e' is a sequence of vectors; use it with nbhd-member", name)
        m = _CALL.fullmatch(text)
        if m and m.group(1) in ("pow", "thm2", "shifted"):
            fn, args = m.group(1), _split_args(m.group(2))
            if fn == "pow" and len(args) == 1:
                return seqs.pow_seq(parse_frac(args[0], name))
            if fn == "thm2" and len(args) == 1:
                from .ringseq import ring_seq

                return ring_seq(parse_frac(args[0], name))
            if fn == "shifted" and len(args) == 2:
                return seqs.shifted(seq_from_spec(args[0], name), parse_int(args[1], name))
            raise ConfigError(f"bad arguments for {fn}: {args}", name)
        return seqs.from_expr(text)
    except (SeqError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), name) from None


def _seq_from_dict(doc: dict, name: str) -> IntSeq:
    preset = doc.get("preset")
    keys = set(doc) - {"preset"}
    expect = {
        "pow": {"r"}, "pow2": set(), "shifted": {"base", "c"}, "thm2": {"r"},
        "expr": {"text"}, "table": {"values", "start"}, "tracked": {"base", "f", "eps", "N"},
    }
    if preset not in expect:
        raise ConfigError(f"unknown sequence preset {preset!r}", name)
    extra = keys - expect[preset] - ({"start"} if preset == "table" else set()) - ({"eps"} if preset == "tracked" else set())
    if extra:
        raise ConfigError(f"unknown keys {sorted(extra)} for preset {preset}", name)
    if preset == "pow":
        return seqs.pow_seq(parse_frac(doc["r"], name))
    if preset == "pow2":
        return seqs.pow2()
    if preset == "shifted":
        return seqs.shifted(seq_from_spec(doc["base"], name), parse_int(doc["c"], name))
    if preset == "thm2":
        from .ringseq import ring_seq

        return ring_seq(parse_frac(doc["r"], name))
    if preset == "expr":
        return seqs.from_expr(doc["text"])
    if preset == "table":
        return seqs.table([parse_int(v, name) for v in doc["values"]], parse_int(doc.get("start", 0), name))
    from .tracker import TrackerSpec
    from .zbase import base_from_config

    spec = TrackerSpec(growth_from_text(doc["f"]), eps_from_text(doc.get("eps", "default")),
                       base_from_config(doc["base"]))
    from .tracker import track

    return track(spec, parse_int(doc["N"], name)).as_intseq()


def growth_from_text(text: str):
    from .tracker import growth_expr

    return growth_expr(text)


def eps_from_text(text: str):
    from .tracker import PAPER_DEFAULT

    if text in ("default", PAPER_DEFAULT):
        return PAPER_DEFAULT
    ev = _exact_expr(text)
    return ev


def _exact_expr(text: str):
    """Expression in n evaluated to an exact Fraction (no flooring)."""
    from .seqs import _Parser

    p = _Parser(text)
    ev = p.expr()
    if p.i != len(p.toks):
        raise ConfigError(f"trailing input in {text!r}", "eps")
    return ev
