"""Built-in registry of named benchmark scenarios.

Scenario names encode the benchmark table and the row: for example
``t2-s1-q15-rho02-s3`` is the screening study with design S1, q=15, rho=0.2,
s=3 at the row's sample size, ``t1-p2000-n600-s1q15-rho0`` an eigenvalue
study, and ``f1-s1-q15-s12-rho04`` an oracle t-statistic study. Expanding a
scenario and re-deriving its name is the identity.

The two logistic/linear tables that print the s=6 pattern as "(1,1,3,1,...)"
are registered with the corrected "(1,1.3,...)" motif; pass an explicit
pattern override to reproduce the literal reading.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datagen import SimSetting

MMS_KIND = "mms"
EIGEN_KIND = "eigen"
TSTAT_KIND = "tstat"

_RHOS = (0.0, 0.2, 0.4, 0.6, 0.8)


def _rho_tag(rho: float) -> str:
    return "0" if rho == 0.0 else f"0{int(round(rho * 10))}"


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: str
    table: str
    design: str
    family: str
    n: int
    p: int
    s: int
    pattern: str
    q: int = 0
    rho: float = 0.0

    def setting(self, seed: int = 0) -> SimSetting:
        return SimSetting(
            design=self.design,
            n=self.n,
            p=self.p,
            s=self.s,
            beta_pattern=self.pattern,
            family=self.family,
            seed=int(seed),
            q=self.q,
            rho=self.rho,
        )


def scenario_name(kind, table, design, q, rho, s=None, n=None, p=None) -> str:
    """Derive the canonical registry name from scenario fields."""
    d = design.lower()
    if kind == EIGEN_KIND:
        return f"{table}-p{p}-n{n}-{d}q{q}-rho{_rho_tag(rho)}"
    if kind == TSTAT_KIND:
        return f"{table}-{d}-q{q}-s{s}-rho{_rho_tag(rho)}"
    if design == "S3":
        return f"{table}-s3-s{s}"
    return f"{table}-{d}-q{q}-rho{_rho_tag(rho)}-s{s}"


def _flat(n):
    return dict.fromkeys(_RHOS, n)


def _rho0(n0, rest):
    return {rho: (n0 if rho == 0.0 else rest) for rho in _RHOS}


# (table, family, design, p, q, s, pattern, {rho: n}); q=None marks S3 rows,
# which carry no correlation parameter.
_MMS_PANELS = [
    ("t2", "bernoulli", "S1", 40000, 15, 3, "(1,1.3,1)", _rho0(300, 200)),
    ("t2", "bernoulli", "S1", 40000, 15, 6, "(1,1.3,...)", _flat(300)),
    ("t2", "bernoulli", "S1", 40000, 15, 12, "(1,1.3,...)", _rho0(500, 300)),
    ("t2", "bernoulli", "S1", 40000, 15, 15, "(1,1.3,...)", _rho0(600, 300)),
    ("t2", "bernoulli", "S2", 40000, 50, 3, "(1,1.3,1)", _flat(300)),
    ("t2", "bernoulli", "S2", 40000, 50, 6, "(1,1.3,1,...)", _flat(500)),
    ("t2", "bernoulli", "S2", 40000, 50, 12, "(1,1.3,...)", _rho0(600, 500)),
    ("t2", "bernoulli", "S2", 40000, 50, 15, "(1,1.3,...)", _rho0(800, 500)),
    ("t3", "bernoulli", "S1", 5000, 15, 3, "(1,1.3,1)", _flat(300)),
    ("t3", "bernoulli", "S1", 5000, 15, 6, "(1,1.3,...)", _flat(300)),
    ("t3", "bernoulli", "S1", 5000, 15, 12, "(1,1.3,...)", _flat(300)),
    ("t3", "bernoulli", "S1", 5000, 15, 15, "(3,4,...)", _flat(300)),
    ("t3", "bernoulli", "S2", 2000, 50, 3, "(3,4,3)", _flat(200)),
    (
        "t3",
        "bernoulli",
        "S2",
        2000,
        50,
        6,
        "(3,-3,...)",
        {0.0: 200, 0.2: 200, 0.4: 200, 0.6: 300, 0.8: 400},
    ),
    ("t3", "bernoulli", "S2", 2000, 50, 12, "(3,4,...)", _flat(600)),
    ("t3", "bernoulli", "S2", 2000, 50, 24, "(3,4,...)", _flat(600)),
    ("t3", "bernoulli", "S3", 2000, None, 3, "(1,-1,...)", {None: 600}),
    ("t3", "bernoulli", "S3", 2000, None, 6, "(1,-1,...)", {None: 600}),
    ("t3", "bernoulli", "S3", 2000, None, 12, "(1,-1,...)", {None: 600}),
    ("t3", "bernoulli", "S3", 2000, None, 24, "(1,-1,...)", {None: 600}),
    ("t4", "gaussian", "S1", 40000, 15, 3, "(1,1.3,1)", _flat(80)),
    ("t4", "gaussian", "S1", 40000, 15, 6, "(1,1.3,...)", _flat(150)),
    ("t4", "gaussian", "S1", 40000, 15, 12, "(1,1.3,...)", _rho0(300, 200)),
    ("t4", "gaussian", "S1", 40000, 15, 15, "(1,1.3,...)", _rho0(400, 200)),
    ("t4", "gaussian", "S2", 40000, 50, 3, "(1,1.3,1)", _flat(100)),
    ("t4", "gaussian", "S2", 40000, 50, 6, "(1,1.3,1,...)", _flat(200)),
    ("t4", "gaussian", "S2", 40000, 50, 12, "(1,1.3,...)", _rho0(400, 300)),
    ("t4", "gaussian", "S2", 40000, 50, 15, "(1,1.3,...)", _rho0(500, 300)),
    ("t5", "gaussian", "S1", 5000, 15, 3, "(0.5,0.67,0.5)", _flat(100)),
    ("t5", "gaussian", "S1", 5000, 15, 6, "(0.5,0.67,...)", _flat(100)),
    ("t5", "gaussian", "S1", 5000, 15, 12, "(0.5,0.67,...)", _rho0(300, 100)),
    ("t5", "gaussian", "S1", 5000, 15, 15, "(0.5,0.67,...)", _rho0(300, 100)),
    ("t5", "gaussian", "S2", 2000, 50, 3, "(0.6,0.8,0.6)", _flat(100)),
    (
        "t5",
        "gaussian",
        "S2",
        2000,
        50,
        6,
        "(3,-3,...)",
        {0.0: 100, 0.2: 100, 0.4: 100, 0.6: 200, 0.8: 200},
    ),
    ("t5", "gaussian", "S2", 2000, 50, 12, "(0.6,0.8,...)", _rho0(200, 100)),
    ("t5", "gaussian", "S2", 2000, 50, 24, "(3,4,...)", _rho0(400, 100)),
    ("t5", "gaussian", "S3", 2000, None, 3, "(1,-1,...)", {None: 600}),
    ("t5", "gaussian", "S3", 2000, None, 6, "(1,-1,...)", {None: 600}),
    ("t5", "gaussian", "S3", 2000, None, 12, "(1,-1,...)", {None: 600}),
    ("t5", "gaussian", "S3", 2000, None, 24, "(1,-1,...)", {None: 600}),
]

# (p, n, design, q) rows of the eigenvalue table; every row spans all rhos.
_EIGEN_ROWS = [
    (40000, 80, "S1", 15),
    (40000, 80, "S2", 50),
    (40000, 300, "S1", 15),
    (40000, 300, "S2", 50),
    (5000, 300, "S1", 15),
    (5000, 300, "S1", 50),
    (2000, 600, "S1", 15),
    (2000, 600, "S1", 50),
    (2000, 600, "S2", 50),
]

# (s, q) panels of the oracle-t figure: logistic, (3,4,...), n=600, p=2000.
_TSTAT_PANELS = [(12, 15), (24, 50)]


def _build_registry():
    registry = {}

    def add(scenario):
        if scenario.name in registry:
            raise RuntimeError(f"duplicate scenario name {scenario.name}")
        registry[scenario.name] = scenario

    for table, family, design, p, q, s, pattern, n_by_rho in _MMS_PANELS:
        for rho, n in n_by_rho.items():
            rho = 0.0 if rho is None else rho
            add(
                Scenario(
                    name=scenario_name(MMS_KIND, table, design, q or 0, rho, s=s),
                    kind=MMS_KIND,
                    table=table,
                    design=design,
                    family=family,
                    n=n,
                    p=p,
                    s=s,
                    pattern=pattern,
                    q=q or 0,
                    rho=rho,
                )
            )

    for p, n, design, q in _EIGEN_ROWS:
        for rho in _RHOS:
            add(
                Scenario(
                    name=scenario_name(EIGEN_KIND, "t1", design, q, rho, n=n, p=p),
                    kind=EIGEN_KIND,
                    table="t1",
                    design=design,
                    family="gaussian",
                    n=n,
                    p=p,
                    s=1,
                    pattern="(1)",
                    q=q,
                    rho=rho,
                )
            )

    for s, q in _TSTAT_PANELS:
        for rho in _RHOS:
            add(
                Scenario(
                    name=scenario_name(TSTAT_KIND, "f1", "S1", q, rho, s=s),
                    kind=TSTAT_KIND,
                    table="f1",
                    design="S1",
                    family="bernoulli",
                    n=600,
                    p=2000,
                    s=s,
                    pattern="(3,4,...)",
                    q=q,
                    rho=rho,
                )
            )

    return registry


REGISTRY = _build_registry()


def scenario_names():
    return sorted(REGISTRY)


def get_scenario(name: str) -> Scenario:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; available scenarios: "
            + ", ".join(scenario_names())
        ) from None
