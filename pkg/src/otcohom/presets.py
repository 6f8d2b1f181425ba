"""Shipping presets: named field/unit data with frozen golden tables.

Two presets cover the supported territory at desk scale: the classical
surface case (s=1, t=1) and a signature (2,1) quartic whose unit pair was
located by the exhaustive search oracle and is re-verified exactly every
time the structure is built.  The golden values pin every table the
pipeline emits; the verify path compares live output against them.
"""

from dataclasses import dataclass, field

from .errors import UnknownPreset


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    field_coeffs: tuple[int, ...]
    units: tuple[tuple[int, ...], ...]
    expected: dict = field(default_factory=dict)


_INOUE_EXPECTED = {
    "s": 1,
    "t": 1,
    "admissible_count": 2,
    "betti": [1, 1, 0, 1, 1],
    "hodge": [
        [1, 1, 0],
        [0, 0, 0],
        [0, 1, 1],
    ],
    "bott_chern": {(0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1},
    "bc_rank_matches_closed_form": True,
    "bc_rank_surplus": {},
    "at_deficiency": [0, 0, 2, 0, 0],
    "at_failure_set": [2],
}

_QUARTIC_EXPECTED = {
    "s": 2,
    "t": 1,
    "admissible_count": 2,
    "betti": [1, 2, 1, 0, 1, 2, 1],
    "hodge": [
        [1, 2, 1, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
        [0, 1, 2, 1],
    ],
    "bott_chern": {
        (0, 0): 1,
        (1, 1): 2,
        (1, 3): 1,
        (2, 3): 2,
        (3, 1): 1,
        (3, 2): 2,
        (3, 3): 1,
    },
    "bc_rank_matches_closed_form": False,
    "bc_rank_surplus": {(1, 2): 1, (2, 1): 1, (2, 2): 1},
    "at_deficiency": [0, 0, 2, 0, 2, 0, 0],
    "at_failure_set": [2, 4],
}

PRESETS: dict[str, Preset] = {
    "inoue-cubic": Preset(
        name="inoue-cubic",
        description="cubic x^3 - x - 1, signature (1,1), unit group "
        "generated by the root itself",
        field_coeffs=(-1, -1, 0, 1),
        units=((0, 1, 0),),
        expected=_INOUE_EXPECTED,
    ),
    "quartic-s2": Preset(
        name="quartic-s2",
        description="quartic x^4 - x^3 - 1, signature (2,1), totally "
        "positive independent units theta^2 and 1 + theta^2 from the "
        "unit search oracle",
        field_coeffs=(-1, 0, 0, -1, 1),
        units=((0, 0, 1, 0), (1, 0, 1, 0)),
        expected=_QUARTIC_EXPECTED,
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        avail = ", ".join(sorted(PRESETS))
        raise UnknownPreset(f"no preset named {name!r}; available: {avail}") from None


def preset_records() -> list[dict]:
    """JSON-friendly listing for the CLI."""
    out = []
    for name in sorted(PRESETS):
        p = PRESETS[name]
        out.append(
            {
                "name": p.name,
                "description": p.description,
                "polynomial": list(p.field_coeffs),
                "units": [list(u) for u in p.units],
                "s": p.expected["s"],
                "t": p.expected["t"],
            }
        )
    return out
