"""
Scenario files.

A scenario file is JSON. Complex numbers are [re, im] pairs and matrices
are nested rows of such pairs. Dynamics, initial states and projectors may
instead be given by name:

    dynamics:  "identity", "qubit-rotation(angle)", "random(seed)"
    rho:       "pure-basis(k)", "maximally-mixed", "random(seed)"
    projector: "identity", "zero", "basis(k)", "not-basis(k)",
               "superposition(j,k)", "antisuperposition(j,k)",
               "random(rank,seed)"

Every error raised while loading is a ScenarioFileError carrying the JSON
path of the offending value and an approximate line number.
"""

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import orjson
import scipy.linalg
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .algebra import Dynamics, HomogeneousHistory
from .compare import HistoryFamily
from .constants import DEFAULT_K_S, DEFAULT_ORDER
from .entropy import Grouping
from .errors import NotADensityError, PegCalcError, ScenarioFileError
from .hilbert import (
    ComplexMatrix,
    basis_projector,
    is_density,
    ket_projector,
    make_rng,
    random_density,
    random_projector,
    random_resolution,
    random_unitary,
)
from .order import available_orders
from .pegs import GleasonOperator, Scenario

logger = structlog.get_logger(__name__)

Pair = Tuple[float, float]
MatrixSpec = List[List[Pair]]

_NAMED = re.compile(r"^\s*(?P<name>[a-z][a-z-]*)\s*(?:\((?P<args>[^)]*)\))?\s*$")
_PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


class HistorySpec(BaseModel):
    """One homogeneous history: a projector spec per time, earliest first."""

    model_config = ConfigDict(extra="forbid")

    label: str
    steps: List[Union[str, MatrixSpec]] = Field(..., min_length=1)


class GroupingSpec(BaseModel):
    """Grouping of the pegs of a family."""

    model_config = ConfigDict(extra="forbid")

    name: str
    family: str
    assignment: List[int]


class ScenarioFile(BaseModel):
    """Schema of a scenario file."""

    model_config = ConfigDict(extra="forbid")

    name: str = "scenario"
    base_dim: int = Field(..., ge=1)
    times: List[float] = Field(..., min_length=1)
    dynamics: Union[str, List[MatrixSpec]] = "identity"
    rho: Union[str, MatrixSpec] = "maximally-mixed"
    histories: List[HistorySpec] = Field(default_factory=list)
    groupings: List[GroupingSpec] = Field(default_factory=list)
    families: Dict[str, List[str]] = Field(default_factory=dict)
    K_S: float = Field(DEFAULT_K_S, gt=0)
    order: str = DEFAULT_ORDER
    seed: int = Field(0, ge=0)
    gleason_operator: Optional[MatrixSpec] = None


@dataclass(frozen=True, eq=False)
class NamedGrouping:
    name: str
    family: str
    grouping: Grouping


@dataclass(frozen=True, eq=False)
class ScenarioSetup:
    """
    A loaded scenario with everything the checks need.

    Attributes:
        name: scenario name
        scenario: validated Scenario
        families: history families by name
        groupings: groupings of family pegs
        K_S: entropy constant
        order: name of the partial order on ℂ
        seed: seed driving the sampled checks
        gleason_operator: extra operator audited alongside Y and Z
    """
    name: str
    scenario: Scenario
    families: Dict[str, HistoryFamily] = field(default_factory=dict)
    groupings: Tuple[NamedGrouping, ...] = ()
    K_S: float = DEFAULT_K_S
    order: str = DEFAULT_ORDER
    seed: int = 0
    gleason_operator: Optional[GleasonOperator] = None


# --------------------------------------------------------------------------- #
# Named specs                                                                 #
# --------------------------------------------------------------------------- #

def _parse_named(spec: str) -> Tuple[str, List[str]]:
    match = _NAMED.match(spec)
    if not match:
        raise ValueError(f"cannot parse {spec!r}")
    args = match.group("args")
    values = [a.strip() for a in args.split(",")] if args and args.strip() else []
    return match.group("name"), values


def _ints(values: Sequence[str], count: int, spec: str) -> List[int]:
    if len(values) != count:
        raise ValueError(f"{spec!r} takes {count} integer argument(s)")
    return [int(v) for v in values]


def parse_matrix(spec: MatrixSpec, dim: Optional[int] = None) -> ComplexMatrix:
    """Nested [re, im] pairs to a complex matrix."""
    arr = np.asarray(spec, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix of [re, im] pairs, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.shape[0]}")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_projector(spec: Union[str, MatrixSpec], dim: int) -> ComplexMatrix:
    if not isinstance(spec, str):
        return parse_matrix(spec, dim)
    name, args = _parse_named(spec)
    eye = np.eye(dim, dtype=np.complex128)
    if name == "identity":
        _ints(args, 0, spec)
        return eye
    if name == "zero":
        _ints(args, 0, spec)
        return np.zeros((dim, dim), dtype=np.complex128)
    if name == "basis":
        (k,) = _ints(args, 1, spec)
        return basis_projector(dim, k)
    if name == "not-basis":
        (k,) = _ints(args, 1, spec)
        return eye - basis_projector(dim, k)
    if name in ("superposition", "antisuperposition"):
        j, k = _ints(args, 2, spec)
        if j == k or not (0 <= j < dim and 0 <= k < dim):
            raise ValueError(f"{spec!r} needs two distinct basis indices below {dim}")
        sign = 1.0 if name == "superposition" else -1.0
        return ket_projector(eye[j] + sign * eye[k])
    if name == "random":
        rank, seed = _ints(args, 2, spec)
        return random_projector(dim, rank, seed)
    raise ValueError(f"unknown projector {spec!r}")


def parse_rho(spec: Union[str, MatrixSpec], dim: int) -> ComplexMatrix:
    if not isinstance(spec, str):
        rho = parse_matrix(spec, dim)
        if not is_density(rho):
            raise NotADensityError("rho must be positive semidefinite with unit trace")
        return rho
    name, args = _parse_named(spec)
    if name == "pure-basis":
        (k,) = _ints(args, 1, spec)
        return basis_projector(dim, k)
    if name == "maximally-mixed":
        _ints(args, 0, spec)
        return np.eye(dim, dtype=np.complex128) / dim
    if name == "random":
        (seed,) = _ints(args, 1, spec)
        return random_density(dim, seed)
    raise ValueError(f"unknown rho {spec!r}")


def qubit_rotation(angle: float) -> ComplexMatrix:
    """exp(−i angle X / 2)."""
    return scipy.linalg.expm(-0.5j * angle * _PAULI_X)


def parse_dynamics(spec: Union[str, List[MatrixSpec]], dim: int, times: Sequence[float]) -> Dynamics:
    """
    Named generators give one propagator per interval; the initial
    interval is the identity.
    """
    if not isinstance(spec, str):
        return Dynamics(tuple(parse_matrix(m, dim) for m in spec))
    name, args = _parse_named(spec)
    steps = np.diff(np.asarray(times, dtype=np.float64))
    if name == "identity":
        if args:
            raise ValueError("'identity' takes no arguments")
        return Dynamics.identity(dim, len(times))
    if name == "qubit-rotation":
        if dim != 2:
            raise ValueError("qubit-rotation needs base_dim 2")
        if len(args) != 1:
            raise ValueError("qubit-rotation takes one angle")
        angle = float(args[0])
        return Dynamics(tuple(qubit_rotation(angle * dt) for dt in steps))
    if name == "random":
        (seed,) = _ints(args, 1, spec)
        rng = make_rng(seed)
        return Dynamics(tuple(random_unitary(dim, rng) for _ in steps))
    raise ValueError(f"unknown dynamics {spec!r}")


# --------------------------------------------------------------------------- #
# Loading                                                                     #
# --------------------------------------------------------------------------- #

def _format_loc(loc: Sequence[Union[str, int]]) -> str:
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def locate_line(text: str, loc: Sequence[Union[str, int]]) -> Optional[int]:
    """
    Approximate 1-based line of a JSON path.

    Follows the object keys of ``loc`` through the text in order; list
    indices are not resolved.
    """
    if not text:
        return None
    lines = text.splitlines()
    line = 0
    found = False
    for part in loc:
        if not isinstance(part, str):
            continue
        needle = f'"{part}"'
        for index in range(line, len(lines)):
            if needle in lines[index]:
                line, found = index, True
                break
    return line + 1 if found else None


def _spec_error(exc: Exception, loc: Sequence[Union[str, int]], text: str) -> ScenarioFileError:
    return ScenarioFileError(str(exc), path=_format_loc(loc), line=locate_line(text, loc))


def parse_scenario_text(text: str) -> ScenarioFile:
    """
    Raises:
        ScenarioFileError: malformed JSON or schema violation
    """
    try:
        raw = orjson.loads(text)
    except orjson.JSONDecodeError as exc:
        raise ScenarioFileError(f"invalid JSON: {exc}", line=getattr(exc, "lineno", None)) from exc
    try:
        return ScenarioFile.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = first.get("loc", ())
        raise ScenarioFileError(first.get("msg", "invalid value"), _format_loc(loc), locate_line(text, loc)) from exc


def build_setup(spec: ScenarioFile, text: str = "") -> ScenarioSetup:
    """
    Turn a validated ScenarioFile into a ScenarioSetup.

    Raises:
        ScenarioFileError: a value parses but violates a domain invariant
    """
    dim = spec.base_dim
    times = tuple(spec.times)

    def guarded(loc, build):
        try:
            return build()
        except (PegCalcError, ValueError) as exc:
            raise _spec_error(exc, loc, text) from exc

    dynamics = guarded(("dynamics",), lambda: parse_dynamics(spec.dynamics, dim, times))
    rho = guarded(("rho",), lambda: parse_rho(spec.rho, dim))

    histories = []
    for i, h in enumerate(spec.histories):
        projectors = [
            guarded(("histories", i, "steps", m), lambda step=step: parse_projector(step, dim))
            for m, step in enumerate(h.steps)
        ]
        histories.append(
            guarded(("histories", i), lambda: HomogeneousHistory.from_projectors(projectors, times, label=h.label))
        )
    scenario = guarded(
        (),
        lambda: Scenario(dim, times, dynamics, rho, tuple(histories), seed=spec.seed, label=spec.name),
    )

    by_label = {h.label: h for h in histories}
    if len(by_label) != len(histories):
        raise ScenarioFileError("history labels must be unique", "histories", locate_line(text, ("histories",)))
    families = {}
    for name, labels in spec.families.items():
        missing = [label for label in labels if label not in by_label]
        if missing:
            raise ScenarioFileError(
                f"unknown histories {missing}", f"families.{name}", locate_line(text, ("families", name))
            )
        family = guarded(("families", name), lambda: HistoryFamily(tuple(by_label[l] for l in labels), name=name))
        families[name] = replace(family, complete=family.is_resolution())

    groupings = []
    for i, g in enumerate(spec.groupings):
        loc = ("groupings", i)
        if g.family not in families:
            raise ScenarioFileError(f"unknown family {g.family!r}", _format_loc(loc), locate_line(text, loc))
        if len(g.assignment) != len(families[g.family]):
            raise ScenarioFileError(
                "assignment must cover every family member", _format_loc(loc), locate_line(text, loc)
            )
        groupings.append(NamedGrouping(g.name, g.family, guarded(loc, lambda: Grouping(tuple(g.assignment)))))

    if spec.order not in available_orders():
        raise ScenarioFileError(
            f"unknown order {spec.order!r}; known: {', '.join(available_orders())}",
            "order",
            locate_line(text, ("order",)),
        )

    gleason_operator = None
    if spec.gleason_operator is not None:
        gleason_operator = guarded(
            ("gleason_operator",),
            lambda: GleasonOperator(parse_matrix(spec.gleason_operator), scenario.dims),
        )

    return ScenarioSetup(
        name=spec.name,
        scenario=scenario,
        families=families,
        groupings=tuple(groupings),
        K_S=spec.K_S,
        order=spec.order,
        seed=spec.seed,
        gleason_operator=gleason_operator,
    )


def load_scenario_text(text: str) -> ScenarioSetup:
    return build_setup(parse_scenario_text(text), text)


def load_scenario(path: Union[str, Path]) -> ScenarioSetup:
    """
    Read and validate a scenario file.

    Raises:
        ScenarioFileError: unreadable file, malformed JSON, schema or
            domain violation
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioFileError(f"cannot read {path}: {exc.strerror}") from exc
    setup = load_scenario_text(text)
    logger.info("scenario loaded", path=str(path), name=setup.name, histories=len(setup.scenario.histories))
    return setup


# --------------------------------------------------------------------------- #
# Generated scenarios                                                         #
# --------------------------------------------------------------------------- #

def _time_grid(n: int) -> Tuple[float, ...]:
    return tuple(float(t) for t in range(n))


def _slot_family(
    dim: int,
    times: Sequence[float],
    slot: int,
    resolution: Sequence[ComplexMatrix],
    name: str,
) -> HistoryFamily:
    """Family with ``resolution`` at one time and the identity elsewhere."""
    eye = np.eye(dim, dtype=np.complex128)
    members = []
    for k, p in enumerate(resolution):
        projectors = [p if m == slot else eye for m in range(len(times))]
        members.append(HomogeneousHistory.from_projectors(projectors, times, label=f"{name}{k}"))
    return HistoryFamily(tuple(members), complete=True, name=name)


def random_scenario(seed: Union[int, np.random.SeedSequence], index: int = 0) -> ScenarioSetup:
    """
    Random scenario with dim H in {2, 3} and 2 or 3 times.

    Histories form the product family of one random basis per time. The
    families ``alpha`` (first time) and ``beta`` (last time) commute;
    ``gamma`` uses another basis at the first time and does not commute
    with ``alpha``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    dim = int(rng.choice([2, 3]))
    n = int(rng.choice([2, 3]))
    times = _time_grid(n)
    dynamics = Dynamics(tuple(random_unitary(dim, rng) for _ in range(n - 1)))
    rho = random_density(dim, rng)
    bases = [random_resolution(dim, [1] * dim, rng) for _ in range(n)]
    histories = HistoryFamily.product(bases, times, name="histories")
    scenario = Scenario(dim, times, dynamics, rho, histories.members, seed=index, label=f"random-{index}")

    families = {
        "histories": histories,
        "alpha": _slot_family(dim, times, 0, bases[0], "alpha"),
        "beta": _slot_family(dim, times, n - 1, bases[-1], "beta"),
        "gamma": _slot_family(dim, times, 0, random_resolution(dim, [1] * dim, rng), "gamma"),
    }
    assignment = tuple(int(g) for g in rng.integers(0, 2, size=len(histories)))
    groupings = (NamedGrouping("random-split", "histories", Grouping(assignment)),)
    return ScenarioSetup(
        name=f"random-{index}",
        scenario=scenario,
        families=families,
        groupings=groupings,
        seed=int(rng.integers(0, 2**31)),
    )


def random_scenarios(count: int, seed: int) -> List[ScenarioSetup]:
    """``count`` independent scenarios, each on its own spawned seed sequence."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [random_scenario(child, index) for index, child in enumerate(children)]


def classical_scenario(dim: int = 2, n: int = 2, seed: int = 0) -> ScenarioSetup:
    """
    Diagonal initial state, trivial dynamics, computational-basis histories.

    Every peg is a classical probability; the order is ``real-total``.
    """
    rng = make_rng(seed)
    times = _time_grid(n)
    weights = rng.uniform(0.1, 1.0, size=dim)
    rho = np.diag(weights / weights.sum()).astype(np.complex128)
    basis = [basis_projector(dim, k) for k in range(dim)]
    histories = HistoryFamily.product([basis] * n, times, name="histories")
    scenario = Scenario(dim, times, Dynamics.identity(dim, n), rho, histories.members, seed=seed, label="classical")
    families = {
        "histories": histories,
        "alpha": _slot_family(dim, times, 0, basis, "alpha"),
        "beta": _slot_family(dim, times, n - 1, basis, "beta"),
    }
    groupings = (NamedGrouping("first-time", "histories", Grouping(tuple(i // dim ** (n - 1) for i in range(len(histories))))),)
    return ScenarioSetup(
        name="classical",
        scenario=scenario,
        families=families,
        groupings=groupings,
        order="real-total",
        seed=seed,
    )
