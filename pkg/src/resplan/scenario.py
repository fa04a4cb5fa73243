"""Problem instances: candidate sites, test points, channel gains and prices.

Scenarios are immutable. Everything is stored in linear units (watts, linear
SINR); dBm/dB values only appear in the file format and in
:class:`GenerationParams`.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .cost import lambda_t_eur_per_watt
from .energy import EnergyDistribution
from .errors import CapacityError, ConfigurationError, ScenarioParseError, ValidationError
from .radio import pathloss_gain


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1000.0


def watt_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w * 1000.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class Site:
    id: int
    position: tuple[float, float]
    install_cost: float
    tx_power_per_tp: float
    static_power: float
    outage_bound: float
    harvest: EnergyDistribution

    def __post_init__(self) -> None:
        if not self.install_cost >= 0:
            raise ValidationError("install_cost ≥ 0", f"site {self.id}")
        if not self.tx_power_per_tp > 0:
            raise ValidationError("tx_power_per_tp > 0", f"site {self.id}")
        if not self.static_power >= 0:
            raise ValidationError("static_power ≥ 0", f"site {self.id}")
        if not 0 < self.outage_bound < 1:
            raise ValidationError("0 < outage_bound < 1", f"site {self.id}")


@dataclass(frozen=True)
class TestPoint:
    __test__ = False  # keep pytest from collecting this class

    id: int
    position: tuple[float, float]
    noise_power: float
    sinr_min: float

    def __post_init__(self) -> None:
        if not self.noise_power > 0:
            raise ValidationError("noise_power > 0", f"tp {self.id}")
        if not self.sinr_min > 0:
            raise ValidationError("sinr_min > 0", f"tp {self.id}")


@dataclass(frozen=True)
class EdgeParams:
    conn_cost: float
    loss_factor: float


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable planning instance.

    ``conn_cost`` is an N×N matrix of per-directed-line costs (diagonal
    ignored). When ``edge_unit_cost`` is set, the matrix was derived as unit
    cost times site distance and is not written to files.
    """

    sites: tuple[Site, ...]
    tps: tuple[TestPoint, ...]
    gains: np.ndarray
    conn_cost: np.ndarray
    loss: float
    capacity: int
    energy_price: float
    life_cycle_years: float
    area_m: float = 3000.0
    edge_unit_cost: float | None = None
    l_a_db: float = 148.1
    l_b_db: float = 37.6

    def __post_init__(self) -> None:
        object.__setattr__(self, "sites", tuple(self.sites))
        object.__setattr__(self, "tps", tuple(self.tps))
        gains = np.array(self.gains, dtype=float)
        conn = np.array(self.conn_cost, dtype=float)
        gains.setflags(write=False)
        conn.setflags(write=False)
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "conn_cost", conn)
        n, m = len(self.sites), len(self.tps)
        if n < 1:
            raise ValidationError("at least one candidate site")
        if gains.shape != (m, n):
            raise ValidationError("gains dimensions match sites/tps", f"{gains.shape} vs ({m}, {n})")
        if not np.all((gains > 0) & (gains <= 1)):
            raise ValidationError("all gains in (0,1]")
        if conn.shape != (n, n):
            raise ValidationError("conn_cost is N×N", f"{conn.shape}")
        off = ~np.eye(n, dtype=bool)
        if not np.all(conn[off] >= 0):
            raise ValidationError("conn_cost ≥ 0")
        if not 0 <= self.loss <= 1:
            raise ValidationError("0 ≤ loss_factor ≤ 1")
        if not (isinstance(self.capacity, (int, np.integer)) and self.capacity >= 1):
            raise ValidationError("capacity ≥ 1", f"got {self.capacity!r}")
        if not self.energy_price > 0:
            raise ValidationError("energy_price > 0")
        if not self.life_cycle_years > 0:
            raise ValidationError("life_cycle_years > 0")
        for i, site in enumerate(self.sites):
            if site.id != i:
                raise ValidationError("site ids are 0..N-1 in order")
        for i, tp in enumerate(self.tps):
            if tp.id != i:
                raise ValidationError("tp ids are 0..M-1 in order")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        for f in dataclasses.fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, np.ndarray):
                if not np.array_equal(a, b):
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def n_tps(self) -> int:
        return len(self.tps)

    def edge(self, t: int, n: int) -> EdgeParams:
        return EdgeParams(float(self.conn_cost[t, n]), self.loss)

    @cached_property
    def tx_power(self) -> np.ndarray:
        return np.array([s.tx_power_per_tp for s in self.sites])

    @cached_property
    def static_power(self) -> np.ndarray:
        return np.array([s.static_power for s in self.sites])

    @cached_property
    def install_cost(self) -> np.ndarray:
        return np.array([s.install_cost for s in self.sites])

    @cached_property
    def supply_quantile(self) -> np.ndarray:
        return np.array([s.harvest.quantile(s.outage_bound) for s in self.sites])

    @cached_property
    def noise(self) -> np.ndarray:
        return np.array([tp.noise_power for tp in self.tps])

    @cached_property
    def sinr_min(self) -> np.ndarray:
        return np.array([tp.sinr_min for tp in self.tps])

    @cached_property
    def site_xy(self) -> np.ndarray:
        return np.array([s.position for s in self.sites], dtype=float).reshape(-1, 2)

    @cached_property
    def tp_xy(self) -> np.ndarray:
        return np.array([tp.position for tp in self.tps], dtype=float).reshape(-1, 2)

    @cached_property
    def distances(self) -> np.ndarray:
        """M×N TP-to-site distances in meters."""
        return np.linalg.norm(self.tp_xy[:, None, :] - self.site_xy[None, :, :], axis=2)

    @cached_property
    def loss_factor(self) -> np.ndarray:
        lf = np.full((self.n_sites, self.n_sites), self.loss)
        np.fill_diagonal(lf, 0.0)
        return lf

    @cached_property
    def lambda_t(self) -> float:
        return lambda_t_eur_per_watt(self.energy_price, self.life_cycle_years)

    def replace(self, **changes: Any) -> Scenario:
        return dataclasses.replace(self, **changes)

    def with_life_cycle(self, years: float) -> Scenario:
        return self.replace(life_cycle_years=years)

    def without_res(self, install_cost: float) -> Scenario:
        """Same network with zero harvest everywhere and a different site price."""
        sites = tuple(
            dataclasses.replace(
                s, install_cost=install_cost, harvest=EnergyDistribution("uniform", 0.0, 0.0)
            )
            for s in self.sites
        )
        return self.replace(sites=sites)

    def with_harvest(self, harvests: Sequence[EnergyDistribution]) -> Scenario:
        sites = tuple(dataclasses.replace(s, harvest=h) for s, h in zip(self.sites, harvests, strict=True))
        return self.replace(sites=sites)

    def with_capacity(self, capacity: int) -> Scenario:
        return self.replace(capacity=capacity)


def site_distance_matrix(xy: np.ndarray) -> np.ndarray:
    return np.linalg.norm(xy[:, None, :] - xy[None, :, :], axis=2)


def gains_from_positions(tp_xy: np.ndarray, site_xy: np.ndarray, l_a_db: float, l_b_db: float) -> np.ndarray:
    d = np.linalg.norm(np.asarray(tp_xy)[:, None, :] - np.asarray(site_xy)[None, :, :], axis=2)
    return pathloss_gain(d, l_a_db, l_b_db)


# ---------------------------------------------------------------------------
# Random generation


@dataclass(frozen=True)
class GenerationParams:
    """Knobs for :func:`generate_scenario`; defaults give the reference 3 km, 9-site, 20-TP setup."""

    area_m: float = 3000.0
    n_sites: int = 9
    n_tps: int = 20
    capacity: int = 12
    install_cost_eur: float = 60_000.0
    tx_power_w: float = 20.0
    static_power_w: float = 19.0
    outage_bound: float = 0.05
    noise_dbm: float = -114.0
    sinr_min_db: float = 0.0
    l_a_db: float = 148.1
    l_b_db: float = 37.6
    edge_unit_cost_eur_per_m: float = 10.0
    loss_factor: float = 0.01
    energy_price_eur_per_kwh: float = 0.3
    life_cycle_years: float = 10.0
    harvest_a_range_w: tuple[float, float] = (0.0, 100.0)
    harvest_b_range_w: tuple[float, float] = (100.0, 200.0)
    # Fixed per-site (a, b) pairs; when set, the ranges above are ignored.
    harvest: tuple[tuple[float, float], ...] | None = field(default=None)


def grid_positions(area_m: float, n_sites: int) -> np.ndarray:
    side = math.isqrt(n_sites)
    if side * side != n_sites:
        raise ConfigurationError(f"number of candidate sites must be a perfect square, got {n_sites}")
    spacing = area_m / side
    coords = spacing * (np.arange(side) + 0.5)
    return np.array([(x, y) for x in coords for y in coords])


def generate_scenario(params: GenerationParams, seed: int | np.random.SeedSequence) -> Scenario:
    """Grid of candidate sites, uniformly scattered TPs, pathloss gains.

    The RNG draws TP positions first, then per-site harvest bounds, so a fixed
    seed gives the same TP layout whatever harvest setting is used.
    """
    site_xy = grid_positions(params.area_m, params.n_sites)
    if params.n_tps > params.capacity * params.n_sites:
        raise CapacityError(
            f"M={params.n_tps} test points exceed total capacity B·N={params.capacity * params.n_sites}"
        )
    rng = np.random.default_rng(seed)
    tp_xy = rng.uniform(0.0, params.area_m, size=(params.n_tps, 2))
    if params.harvest is not None:
        if len(params.harvest) != params.n_sites:
            raise ConfigurationError("harvest must list one (a, b) pair per site")
        bounds = [(float(a), float(b)) for a, b in params.harvest]
    else:
        a = rng.uniform(*params.harvest_a_range_w, size=params.n_sites)
        b = rng.uniform(*params.harvest_b_range_w, size=params.n_sites)
        bounds = list(zip(a.tolist(), b.tolist()))

    sites = tuple(
        Site(
            id=i,
            position=(float(site_xy[i, 0]), float(site_xy[i, 1])),
            install_cost=params.install_cost_eur,
            tx_power_per_tp=params.tx_power_w,
            static_power=params.static_power_w,
            outage_bound=params.outage_bound,
            harvest=EnergyDistribution("uniform", lo, hi),
        )
        for i, (lo, hi) in enumerate(bounds)
    )
    noise = dbm_to_watt(params.noise_dbm)
    gamma = db_to_linear(params.sinr_min_db)
    tps = tuple(
        TestPoint(id=j, position=(float(tp_xy[j, 0]), float(tp_xy[j, 1])), noise_power=noise, sinr_min=gamma)
        for j in range(params.n_tps)
    )
    return Scenario(
        sites=sites,
        tps=tps,
        gains=gains_from_positions(tp_xy, site_xy, params.l_a_db, params.l_b_db),
        conn_cost=params.edge_unit_cost_eur_per_m * site_distance_matrix(site_xy),
        loss=params.loss_factor,
        capacity=params.capacity,
        energy_price=params.energy_price_eur_per_kwh,
        life_cycle_years=params.life_cycle_years,
        area_m=params.area_m,
        edge_unit_cost=params.edge_unit_cost_eur_per_m,
        l_a_db=params.l_a_db,
        l_b_db=params.l_b_db,
    )


# ---------------------------------------------------------------------------
# File format (JSON)


def _number(obj: dict, key: str, path: str) -> float:
    if key not in obj:
        raise ScenarioParseError("missing required key", field=f"{path}{key}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"expected a number, got {value!r}", field=f"{path}{key}")
    return float(value)


def _matrix(raw: Any, shape: tuple[int, int], name: str) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"not a numeric matrix: {exc}", field=name) from None
    if arr.shape != shape:
        raise ScenarioParseError(f"expected shape {shape}, got {arr.shape}", field=name)
    return arr


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioParseError("top level must be an object")
    for key in ("sites", "tps"):
        if not isinstance(doc.get(key), list):
            raise ScenarioParseError("expected a list", field=key)
    capacity = doc.get("capacity")
    if isinstance(capacity, bool) or not isinstance(capacity, int):
        raise ScenarioParseError(f"expected an integer, got {capacity!r}", field="capacity")
    pathloss = doc.get("pathloss", {})
    l_a = float(pathloss.get("l_a_db", 148.1))
    l_b = float(pathloss.get("l_b_db", 37.6))

    sites = []
    for i, raw in enumerate(doc["sites"]):
        path = f"sites[{i}]."
        h = raw.get("harvest")
        if not isinstance(h, dict):
            raise ScenarioParseError("missing harvest object", field=f"{path}harvest")
        harvest = EnergyDistribution(
            str(h.get("kind", "uniform")), _number(h, "a_w", f"{path}harvest."), _number(h, "b_w", f"{path}harvest.")
        )
        sites.append(
            Site(
                id=i,
                position=(_number(raw, "x_m", path), _number(raw, "y_m", path)),
                install_cost=_number(raw, "install_cost_eur", path),
                tx_power_per_tp=_number(raw, "tx_power_w", path),
                static_power=_number(raw, "static_power_w", path),
                outage_bound=_number(raw, "outage_bound", path),
                harvest=harvest,
            )
        )
    tps = []
    for j, raw in enumerate(doc["tps"]):
        path = f"tps[{j}]."
        # Exact linear values take precedence over the rounded dB forms.
        noise = _number(raw, "noise_w", path) if "noise_w" in raw else dbm_to_watt(_number(raw, "noise_dbm", path))
        gamma = (
            _number(raw, "sinr_min", path) if "sinr_min" in raw else db_to_linear(_number(raw, "sinr_min_db", path))
        )
        tps.append(
            TestPoint(id=j, position=(_number(raw, "x_m", path), _number(raw, "y_m", path)), noise_power=noise, sinr_min=gamma)
        )

    n, m = len(sites), len(tps)
    site_xy = np.array([s.position for s in sites], dtype=float).reshape(-1, 2)
    tp_xy = np.array([t.position for t in tps], dtype=float).reshape(-1, 2)
    if "gains" in doc:
        gains = _matrix(doc["gains"], (m, n), "gains")
    else:
        gains = gains_from_positions(tp_xy, site_xy, l_a, l_b)
    unit = doc.get("edge_unit_cost_eur_per_m")
    if "conn_cost_eur" in doc:
        conn = _matrix(doc["conn_cost_eur"], (n, n), "conn_cost_eur")
        unit = None
    elif unit is not None:
        unit = _number(doc, "edge_unit_cost_eur_per_m", "")
        conn = unit * site_distance_matrix(site_xy)
    else:
        raise ScenarioParseError("need edge_unit_cost_eur_per_m or conn_cost_eur", field="edge_unit_cost_eur_per_m")

    return Scenario(
        sites=tuple(sites),
        tps=tuple(tps),
        gains=gains,
        conn_cost=conn,
        loss=_number(doc, "loss_factor", ""),
        capacity=capacity,
        energy_price=_number(doc, "energy_price_eur_per_kwh", ""),
        life_cycle_years=_number(doc, "life_cycle_years", ""),
        area_m=_number(doc, "area_m", ""),
        edge_unit_cost=unit,
        l_a_db=l_a,
        l_b_db=l_b,
    )


def scenario_to_dict(s: Scenario) -> dict:
    doc: dict[str, Any] = {
        "area_m": s.area_m,
        "capacity": int(s.capacity),
        "energy_price_eur_per_kwh": s.energy_price,
        "life_cycle_years": s.life_cycle_years,
        "pathloss": {"l_a_db": s.l_a_db, "l_b_db": s.l_b_db},
        "loss_factor": s.loss,
    }
    if s.edge_unit_cost is not None:
        doc["edge_unit_cost_eur_per_m"] = s.edge_unit_cost
    else:
        doc["conn_cost_eur"] = s.conn_cost.tolist()
    doc["sites"] = [
        {
            "x_m": site.position[0],
            "y_m": site.position[1],
            "install_cost_eur": site.install_cost,
            "tx_power_w": site.tx_power_per_tp,
            "static_power_w": site.static_power,
            "outage_bound": site.outage_bound,
            "harvest": {"kind": site.harvest.kind, "a_w": site.harvest.a, "b_w": site.harvest.b},
        }
        for site in s.sites
    ]
    doc["tps"] = [
        {
            "x_m": tp.position[0],
            "y_m": tp.position[1],
            "noise_dbm": watt_to_dbm(tp.noise_power),
            "sinr_min_db": linear_to_db(tp.sinr_min),
            "noise_w": tp.noise_power,
            "sinr_min": tp.sinr_min,
        }
        for tp in s.tps
    ]
    doc["gains"] = s.gains.tolist()
    return doc


def load_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno) from None
    return scenario_from_dict(doc)


def save_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
