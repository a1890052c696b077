"""Static entity-label pools for semantic proxies.

A teacher backend may supply richer labels when one is configured; these
pools keep the offline pipeline deterministic.
"""

from __future__ import annotations

import numpy as np

CITIES = (
    "Avondale", "Brookfield", "Cedarburg", "Dunmore", "Eastvale", "Fairhaven",
    "Glenrock", "Harborview", "Ironwood", "Junction City", "Kingsford",
    "Lakemont", "Maplewood", "Northgate", "Oakridge", "Pinecrest",
)
ITEMS = (
    "oak desk", "copper lamp", "wool rug", "steel cabinet", "glass vase",
    "leather chair", "pine shelf", "brass clock", "ceramic planter",
    "velvet sofa", "marble table", "bamboo screen", "iron stove",
    "walnut dresser", "linen curtain", "granite counter", "cedar chest",
    "silver mirror", "teak bench", "cork board",
)
PRODUCTS = (
    "soap bars", "shampoo bottles", "scented candles", "herbal teas",
    "fruit preserves", "olive oils", "grain mixes", "protein snacks",
    "juice cartons", "spice blends", "yogurt cups", "bread loaves",
)
WORKERS = (
    "morning crew", "midday crew", "evening crew", "overnight crew",
    "weekend crew", "relief crew", "express crew", "support crew",
)
FACILITIES = (
    "Riverside plant", "Hilltop depot", "Central warehouse", "Bayside terminal",
    "Westfield hub", "Summit yard", "Lakeside facility", "Crossroads station",
)
STORES = (
    "Downtown outlet", "Airport store", "Mall kiosk", "Harbor shop",
    "Uptown branch", "Station store", "Campus outlet", "Parkside shop",
)
STATIONS = (
    "pump station A", "pump station B", "relay point C", "relay point D",
    "junction E", "junction F", "terminal G", "terminal H",
)


def pick(pool: tuple[str, ...], count: int, rng: np.random.Generator) -> tuple[str, ...]:
    """`count` distinct labels; extends the pool with numbered variants if short."""
    if count <= len(pool):
        idx = rng.choice(len(pool), size=count, replace=False)
        return tuple(pool[int(i)] for i in idx)
    extended = list(pool) + [f"{pool[i % len(pool)]} {i // len(pool) + 2}" for i in range(count - len(pool))]
    return tuple(extended[:count])
