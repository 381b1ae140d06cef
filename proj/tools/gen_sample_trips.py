#!/usr/bin/env python3
"""Generate data/ved_sample.csv: synthetic VED-shaped trips around one cell.

Vehicles circle or cross a base station at (42.2808, -83.7430) staying within
~400 m of it, sampled every 1-4 s with a few longer pauses that the velocity
estimator must flag as gaps. Deterministic (fixed seed).
"""
import csv
import math
import random
import sys

BS_LAT, BS_LON = 42.2808, -83.7430
EARTH_R = 6371000.0


def to_latlon(east, north):
    lat = BS_LAT + math.degrees(north / EARTH_R)
    lon = BS_LON + math.degrees(east / (EARTH_R * math.cos(math.radians(BS_LAT))))
    return lat, lon


def circle_trip(rng, radius, speed_mean, speed_swing, n, phase):
    t_ms, angle, rows = 0, phase, []
    for i in range(n):
        east, north = radius * math.cos(angle), radius * math.sin(angle)
        rows.append((t_ms, *to_latlon(east, north)))
        dt = rng.randrange(1000, 4001, 100)
        if i in (n // 3,):
            dt = 6000  # pause longer than the admissible sampling interval
        speed = speed_mean + speed_swing * math.sin(2 * math.pi * t_ms / 60000.0)
        angle += speed * dt / 1000.0 / radius
        t_ms += dt
    return rows


def chord_trip(rng, n):
    # Back and forth along a road passing 150 m south of the station.
    t_ms, x, direction, rows = 0, -350.0, 1.0, []
    for i in range(n):
        rows.append((t_ms, *to_latlon(x, -150.0)))
        dt = rng.randrange(1000, 4001, 100)
        if i == n // 2:
            dt = 30000
        speed = 8.0 + 3.0 * math.sin(i / 7.0)
        x += direction * speed * dt / 1000.0
        if abs(x) > 340.0:
            direction = -direction
            x = max(-340.0, min(340.0, x))
        t_ms += dt
    return rows


def main(path):
    rng = random.Random(20241015)
    trips = {
        1201: circle_trip(rng, 300.0, 10.0, 3.0, 120, 0.0),
        1202: circle_trip(rng, 380.0, 14.0, 2.0, 90, 2.0),
        1203: chord_trip(rng, 100),
        1204: circle_trip(rng, 220.0, 6.0, 1.5, 80, -1.0),
    }
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["DayNum", "VehId", "Trip", "Timestamp(ms)", "Latitude[deg]",
                    "Longitude[deg]", "Vehicle Speed[km/h]"])
        for veh, (trip, rows) in enumerate(trips.items(), start=8):
            prev = None
            for t_ms, lat, lon in rows:
                speed = ""
                if prev is not None:
                    d = math.hypot(
                        math.radians(lat - prev[1]) * EARTH_R,
                        math.radians(lon - prev[2]) * EARTH_R * math.cos(math.radians(BS_LAT)))
                    speed = f"{3.6 * d / ((t_ms - prev[0]) / 1000.0):.2f}"
                w.writerow([f"{1.0 + t_ms / 86400000.0:.10f}", veh, trip, t_ms,
                            f"{lat:.7f}", f"{lon:.7f}", speed])
                prev = (t_ms, lat, lon)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/ved_sample.csv")
