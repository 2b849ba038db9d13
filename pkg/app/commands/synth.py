"""Inline synthetic series grammar.

    iid:vol=0.30,len=5000[,mean=0.05][,seed=1]
    regime:vols=0.10;0.30,switch=2500,len=5000[,mean=..][,seed=..]

vol/vols/mean are annualized; lists use ';'.
"""
from typing import Dict

from app.series.schemas import SynthKind, SynthSpec
from app.units import mean_to_period, vol_to_period

KINDS = {"iid": SynthKind.IID_NORMAL, "regime": SynthKind.REGIME_SWITCH}
KEYS = {
    SynthKind.IID_NORMAL: {"vol", "len", "mean", "seed"},
    SynthKind.REGIME_SWITCH: {"vols", "switch", "len", "mean", "seed"},
}


class SynthGrammarError(ValueError):
    pass


def _fields(body: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for part in filter(None, (p.strip() for p in body.split(","))):
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise SynthGrammarError(f"expected key=value, got {part!r}")
        if key in out:
            raise SynthGrammarError(f"duplicate key {key!r}")
        out[key.strip()] = value.strip()
    return out


def parse_synth(text: str, *, default_seed: int = 0, label: str | None = None) -> SynthSpec:
    head, sep, body = text.partition(":")
    kind = KINDS.get(head.strip().lower())
    if kind is None or not sep:
        raise SynthGrammarError(f"spec must start with one of {sorted(KINDS)} followed by ':'")
    fields = _fields(body)
    unknown = set(fields) - KEYS[kind]
    if unknown:
        raise SynthGrammarError(f"unknown keys for {head}: {sorted(unknown)}")
    if "len" not in fields:
        raise SynthGrammarError("len is required")
    try:
        length = int(fields["len"])
        seed = int(fields.get("seed", default_seed))
        mean = mean_to_period(float(fields.get("mean", 0.0)))
        if kind is SynthKind.IID_NORMAL:
            vols = [vol_to_period(float(fields["vol"]))]
            switches = []
        else:
            vols = [vol_to_period(float(v)) for v in fields["vols"].split(";")]
            switches = [int(s) for s in fields["switch"].split(";")]
    except KeyError as e:
        raise SynthGrammarError(f"missing key {e.args[0]!r}")
    except ValueError as e:
        raise SynthGrammarError(f"bad number in {text!r}: {e}")
    return SynthSpec(
        kind=kind,
        mean=mean,
        vols=vols,
        switch_points=switches,
        length=length,
        seed=seed,
        label=label or f"{head.strip().lower()}-{seed}",
    )
