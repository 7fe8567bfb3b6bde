import json

import pytest

import lad


def scenario_doc(waits, homes, budget=100.0, cap=100, members=None):
    """Single-member groups at `waits`, one vehicle per home."""
    members = members or [1] * len(waits)
    customers, groups = [], []
    for g, ((x, y), n) in enumerate(zip(waits, members)):
        ids = [f"c{g}_{k}" for k in range(n)]
        customers += [{"id": i, "x": x, "y": y} for i in ids]
        groups.append({"id": f"g{g + 1}", "members": ids, "waiting_location": {"x": x, "y": y},
                       "t_delivery_s": 120.0 * n})
    vehicles = [
        {"id": f"v{v + 1}", "home": {"x": x, "y": y}, "c_mob_usd_per_km": 0.1 + 0.01 * v,
         "c_stop_usd_per_s": 0.00013, "cap": cap, "t_avail_s": 43200, "f_avail_gal": 13,
         "f_mob_gal_per_km": 0.025, "f_stop_gal_per_s": 0.00006}
        for v, (x, y) in enumerate(homes)
    ]
    return {"depot": {"x": 0, "y": 0}, "budget_usd": budget,
            "drone": {"speed_kmh": 60, "range_km": 5, "service_time_s": 60},
            "vehicles": vehicles, "customers": customers, "groups": groups}


@pytest.fixture
def small():
    doc = scenario_doc([(0, 5), (3, 3), (-2, 4)], [(1, 0), (-1, -1)], cap=3,
                       members=[1, 2, 1])
    return lad.Scenario.from_json(json.dumps(doc))
