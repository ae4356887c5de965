"""INI-style calculus specification files.

::

    [algebra]
    q = formal            ; or 1
    localize = 2 + U + U^-1   ; optional, makes this element invertible

    [module]
    rank = 2
    dagger_signs = -1, -1

    [metric]
    H11 = 2 + U + U^-1
    H12 = 0
    H21 = 0
    H22 = 2 + U + U^-1
    ; Hinv11 .. Hinv22 optional, verified when given

    [differential]
    ; de1_12 is the e1 (x) e2 coefficient of de_1; omitted entries are 0

    [options]
    seed = 0
    bound = 1
    qbound = 0
    samples = 2

Without ``localize``, a metric whose determinant is not invertible is
localised at the determinant automatically.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional

from .algebra import FORMAL, ONE, Element, NotInvertible, ParseError, QuantumTorus
from .forms import CalculusSpec, SpecError, Tensor

_DE_KEY = re.compile(r"^de(\d+)_(\d)(\d)$")


@dataclass
class Options:
    seed: int = 0
    bound: int = 1
    qbound: int = 0
    samples: int = 2


@dataclass
class SpecFile:
    spec: CalculusSpec
    options: Options = field(default_factory=Options)
    source: str = ""


def bundled_specs() -> List[str]:
    root = resources.files("ncconn") / "specs"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def bundled_path(name: str) -> Path:
    stem = name[:-4] if name.endswith(".ini") else name
    return Path(str(resources.files("ncconn") / "specs" / f"{stem}.ini"))


def resolve(path: str) -> Path:
    """A file path, or the name of a bundled spec when no such file exists."""
    p = Path(path)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".ini") else p.name
    if p.parent == Path(".") and stem in bundled_specs():
        return bundled_path(stem)
    return p


def _int_option(cp: configparser.ConfigParser, key: str, default: int, minimum: int = 0) -> int:
    if not cp.has_option("options", key):
        return default
    raw = cp.get("options", key)
    try:
        v = int(raw)
    except ValueError:
        raise SpecError("options", key, f"expected an integer, got {raw!r}") from None
    if v < minimum:
        raise SpecError("options", key, f"must be >= {minimum}")
    return v


def _parse(alg: QuantumTorus, section: str, key: str, text: str) -> Element:
    try:
        return alg.parse(text)
    except ParseError as exc:
        raise SpecError(section, key, f"{exc.message} at position {exc.position} in {text!r}") from None


def loads(text: str, source: str = "<string>") -> SpecFile:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # keys are case-sensitive (H11 vs h11)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise SpecError("file", source, str(exc).splitlines()[0]) from None
    for section in ("algebra", "metric"):
        if not cp.has_section(section):
            raise SpecError(section, "*", "missing section")
    known = {"algebra", "module", "metric", "differential", "options"}
    for section in cp.sections():
        if section not in known:
            raise SpecError(section, "*", f"unknown section (expected one of {sorted(known)})")

    q = cp.get("algebra", "q", fallback="formal").strip()
    if q not in ("formal", "1"):
        raise SpecError("algebra", "q", f"expected 'formal' or '1', got {q!r}")
    mode = FORMAL if q == "formal" else ONE
    base = QuantumTorus(mode)
    alg = base
    explicit_loc = cp.has_option("algebra", "localize")
    if explicit_loc:
        loc = _parse(base, "algebra", "localize", cp.get("algebra", "localize"))
        try:
            alg = QuantumTorus(mode, loc)
        except ValueError as exc:
            raise SpecError("algebra", "localize", str(exc)) from None

    rank = 2
    if cp.has_option("module", "rank"):
        raw = cp.get("module", "rank")
        try:
            rank = int(raw)
        except ValueError:
            raise SpecError("module", "rank", f"expected an integer, got {raw!r}") from None
        if rank != 2:
            raise SpecError("module", "rank", f"the derivation map d = e1 d1 + e2 d2 needs rank 2, got {rank}")
    signs: Optional[List[int]] = None
    if cp.has_option("module", "dagger_signs"):
        raw = cp.get("module", "dagger_signs")
        try:
            signs = [int(s) for s in raw.replace(",", " ").split()]
        except ValueError:
            raise SpecError("module", "dagger_signs", f"expected integers, got {raw!r}") from None

    def read_matrix(prefix: str, required: bool) -> Optional[List[List[Element]]]:
        keys = [f"{prefix}{i + 1}{j + 1}" for i, j in product(range(rank), repeat=2)]
        present = [k for k in keys if cp.has_option("metric", k)]
        if not present and not required:
            return None
        missing = [k for k in keys if k not in present]
        if missing:
            raise SpecError("metric", missing[0], "missing entry")
        return [[_parse(alg, "metric", f"{prefix}{i + 1}{j + 1}", cp.get("metric", f"{prefix}{i + 1}{j + 1}"))
                 for j in range(rank)] for i in range(rank)]

    for key in cp.options("metric"):
        if not re.fullmatch(r"H(inv)?\d\d", key):
            raise SpecError("metric", key, "unknown key (expected Hij or Hinvij)")
    H = read_matrix("H", True)
    Hinv = read_matrix("Hinv", False)

    if not explicit_loc and Hinv is None:
        det = H[0][0] * H[1][1] - H[0][1] * H[1][0]
        try:
            det.inverse()
        except NotInvertible:
            if det and det.is_central() and det.is_self_adjoint() and (mode == ONE or det.is_scalar() or all(k[:2] == (0, 0) for k in det.terms)):
                alg = QuantumTorus(mode, det)
                H = [[alg.coerce(x) for x in row] for row in H]

    de: List[Optional[Tensor]] = [None] * rank
    if cp.has_section("differential"):
        entries: Dict[int, Dict[tuple, Element]] = {}
        for key in cp.options("differential"):
            m = _DE_KEY.match(key)
            if not m:
                raise SpecError("differential", key, "expected keys of the form de<j>_<a><b>")
            j, a, b = (int(x) for x in m.groups())
            if not (1 <= j <= rank and 1 <= a <= rank and 1 <= b <= rank):
                raise SpecError("differential", key, "index out of range")
            entries.setdefault(j - 1, {})[(a - 1, b - 1)] = _parse(alg, "differential", key, cp.get("differential", key))
        for j, coeffs in entries.items():
            de[j] = Tensor(alg, rank, 2, coeffs)

    opts = Options(
        seed=_int_option(cp, "seed", 0),
        bound=_int_option(cp, "bound", 1),
        qbound=_int_option(cp, "qbound", 0),
        samples=_int_option(cp, "samples", 2),
    )
    spec = CalculusSpec.create(alg, H, signs, de, Hinv, name=Path(source).stem)
    return SpecFile(spec, opts, source)


def load(path) -> SpecFile:
    p = resolve(str(path))
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError("file", str(path), exc.strerror or str(exc)) from None
    return loads(text, str(p))
