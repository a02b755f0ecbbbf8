import copy

BASE = {
    "name": "tiny",
    "sim_time_limit_s": 60,
    "update_interval_s": 10,
    "constellation": {"num_planes": 6, "sats_per_plane": 60, "altitude_km": 600, "inclination_deg": 53},
    "links": {"enable_intersatellite_links": True, "min_elevation_deg": 25},
    "ground_stations": [
        {"name": "London", "latitude_deg": 51.5074, "longitude_deg": -0.1278, "role": "sender"},
        {"name": "Paris", "latitude_deg": 48.8647, "longitude_deg": 2.3490, "role": "receiver"},
    ],
    "ping_apps": [{"source": "London", "destination": "Paris", "send_interval_s": 0.5}],
}


def scenario_dict(**overrides):
    data = copy.deepcopy(BASE)
    data.update(overrides)
    return data
