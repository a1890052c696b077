"""Seed application domains used to diversify generated problem semantics."""

SEED_DOMAINS: tuple[str, ...] = (
    "manufacturing and production",
    "supply chain management",
    "food and beverage",
    "transportation and logistics",
    "healthcare and medical",
    "retail and e-commerce",
    "environmental and sustainability",
    "agriculture and forestry",
    "science and research",
    "energy and power systems",
    "finance and banking",
    "sports and entertainment",
    "government and public sector",
    "education",
    "human resources",
    "telecommunications",
    "marketing and media",
    "aerospace and defense",
)
