"""Calibrated synthetic used-Tesla listings.

Stands in for the scraped three-month dataset, which was never published.
Each record draws a model, a model-consistent battery trim and year, then
prices it as

    (base + trim premium) * 0.93^age - mile_rate[model] * miles
        + month drift + gaussian noise,

with a step down past the extended-warranty mileage boundary, rounded to
whole dollars and floored. The exponential age decay, the per-model
mileage rates and the warranty cliff give the price surface real
interactions, so learners that can carve the feature space have
something to find. Base
prices are calibrated so per-model mean prices land on the published
fleet averages (Model X ~83.5k, Model 3 ~51.3k, Model S ~49.4k,
Roadstar 2dr ~51.5k) for the documented seed.
"""

from __future__ import annotations

from ..rng import SplitMix64
from .table import ColumnSchema, Dataset

MODELS = ("Model S", "Model 3", "Model X", "Roadstar 2dr")
MODEL_WEIGHTS = (0.45, 0.22, 0.25, 0.08)

YEAR_RANGE = {
    "Model S": (2012, 2019),
    "Model 3": (2017, 2019),
    "Model X": (2016, 2019),
    "Roadstar 2dr": (2012, 2013),
}

# (trim label, price premium in USD)
BATTERIES = {
    "Model S": (
        ("60", -9000.0), ("70D", -4000.0), ("75D", 0.0), ("85", 2000.0),
        ("90D", 4000.0), ("Base", -6000.0), ("P85", 9000.0),
        ("P100D", 22000.0), ("Performance", 12000.0),
    ),
    "Model 3": (
        ("Standard", -4000.0), ("Mid Range", -1500.0), ("75", 0.0),
        ("Long Range", 2500.0), ("Performance", 7000.0),
    ),
    "Model X": (
        ("75D", -6000.0), ("90D", 0.0), ("100D", 5000.0),
        ("P90D", 9000.0), ("P100D", 18000.0),
    ),
    "Roadstar 2dr": (("Base", 0.0), ("Sport", 6000.0)),
}

BASE_PRICE = {
    "Model S": 71133.0,
    "Model 3": 58502.0,
    "Model X": 94387.0,
    "Roadstar 2dr": 92290.0,
}

AGE_DECAY = 0.93       # value multiplier per year of age
MILE_RATE = {          # USD per mile driven
    "Model S": 0.20,
    "Model 3": 0.30,
    "Model X": 0.34,
    "Roadstar 2dr": 0.06,
}
MONTH_DRIFT = -350.0   # USD per listing month after January 2019
NOISE_SIGMA = 1800.0
PRICE_FLOOR = 5000.0
CLIFF_MILES = 50000.0  # extended-warranty boundary: prices step down past it
CLIFF_DROP = 4500.0

LISTING_MONTHS = ("2019-01-01", "2019-02-01", "2019-03-01")

SCHEMA = (
    ColumnSchema("Model", "categorical", "feature"),
    ColumnSchema("Year", "numeric", "feature"),
    ColumnSchema("Battery", "categorical", "feature"),
    ColumnSchema("Price", "numeric", "target"),
    ColumnSchema("Miles", "numeric", "feature"),
    ColumnSchema("Date", "month", "passthrough"),
)


def synthesize(rows: int, seed: int) -> Dataset:
    """Generate a deterministic synthetic listing dataset."""
    if rows < 1:
        raise ValueError("rows must be >= 1")
    rng = SplitMix64(seed)
    records = []
    for _ in range(rows):
        model = rng.weighted_choice(MODELS, MODEL_WEIGHTS)
        year = rng.randint(*YEAR_RANGE[model])
        battery, premium = rng.choice(BATTERIES[model])
        month = rng.randbelow(len(LISTING_MONTHS))
        age = 2019 - year
        annual = rng.uniform(6000.0, 14000.0)
        miles = float(round(age * annual + rng.uniform(0.0, 4000.0)))
        price = (
            (BASE_PRICE[model] + premium) * AGE_DECAY ** age
            - MILE_RATE[model] * miles
            + MONTH_DRIFT * month
            + rng.gauss(0.0, NOISE_SIGMA)
        )
        if miles > CLIFF_MILES:
            price -= CLIFF_DROP
        price = float(round(max(price, PRICE_FLOOR)))
        records.append((model, float(year), battery, price, miles, LISTING_MONTHS[month]))
    return Dataset(SCHEMA, tuple(records))
