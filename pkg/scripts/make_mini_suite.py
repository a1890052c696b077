"""Regenerate the bundled offline mini-suite (10 problems, fixed seed)."""

from pathlib import Path

from milpforge.cli import main

OUT = Path(__file__).parent.parent / "src" / "milpforge" / "data" / "mini_suite"

if __name__ == "__main__":
    main(
        [
            "generate",
            "--counts",
            "linear=4,knapsack=1,set_cover=1,bin_packing=1,transportation=1,max_flow=1,shift_scheduling=1",
            "--seed",
            "7",
            "--workers",
            "1",
            "--out",
            str(OUT),
        ]
    )
