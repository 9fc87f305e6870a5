"""Writes us101_sample.csv: synthetic stop-and-go traffic in the NGSIM vehicle-trajectory column layout.

Velocities (v_Vel) and accelerations are in ft/s and ft/s^2, one frame every 0.1 s.
"""
import csv
import math
import random

COLUMNS = [
    "Vehicle_ID", "Frame_ID", "Total_Frames", "Global_Time", "Local_X", "Local_Y",
    "Global_X", "Global_Y", "v_Length", "v_Width", "v_Class", "v_Vel", "v_Acc",
    "Lane_ID", "Preceding", "Following", "Space_Headway", "Time_Headway",
]
FT_PER_M = 1.0 / 0.3048
EPOCH_MS = 1118846979700


def stop_and_go(rng, frames, cruise):
    """Velocity in m/s relaxing toward piecewise targets: free flow, slowdowns and occasional stops."""
    v, a = rng.uniform(0.5 * cruise, cruise), 0.0
    target, hold = cruise, 0
    out = []
    for _ in range(frames):
        if hold == 0:
            r = rng.random()
            if r < 0.1:
                target = 0.0
            elif r < 0.45:
                target = rng.uniform(0.2, 0.5) * cruise
            else:
                target = rng.uniform(0.7, 1.0) * cruise
            hold = rng.randint(40, 160)
        hold -= 1
        a = 0.9 * a + 0.1 * max(-3.0, min(2.0, 0.35 * (target - v))) + rng.gauss(0.0, 0.12)
        v = max(0.0, v + 0.1 * a)
        out.append(v)
    return out


def main():
    rng = random.Random(101)
    vehicles = [(1, 1000, 1200, 14.0), (2, 1010, 400, 15.0), (3, 1030, 350, 12.0)]
    rows = []
    for vid, start, frames, cruise in vehicles:
        velocity = stop_and_go(rng, frames, cruise)
        y = rng.uniform(50.0, 150.0)
        lane = rng.randint(1, 5)
        for k, v in enumerate(velocity):
            acc = 0.0 if k == 0 else (v - velocity[k - 1]) / 0.1
            y += v * 0.1 * FT_PER_M
            frame = start + k
            rows.append([
                vid, frame, frames, EPOCH_MS + frame * 100, round(6.0 + 12.0 * lane, 3), round(y, 3),
                round(6451000.0 + 0.3 * y, 3), round(1873000.0 + y, 3), 14.5, 6.4, 2,
                round(v * FT_PER_M, 2), round(acc * FT_PER_M, 2), lane, 0, 0, 0.0, 0.0,
            ])
    rows.sort(key=lambda r: (r[1], r[0]))
    with open("us101_sample.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(COLUMNS)
        writer.writerows(rows)


if __name__ == "__main__":
    main()
