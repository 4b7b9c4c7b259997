"""Write a grid and an SVG chart for every catalog functor.

    python scripts/reproduce_figures.py --out figures --radius 10
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from emq.coefficients import Window, table
from emq.mackey import CATALOG_NAMES, catalog
from emq.render import render_grid, render_svg


@dataclass
class FigureConfig:
    out: Path = Path("figures")
    radius: int = 10
    actions: tuple[str, ...] = ("a", "u")


def reproduce(cfg: FigureConfig) -> list[Path]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    window = Window.square(cfg.radius)
    written = []
    for name in CATALOG_NAMES:
        tab = table(catalog(name), window, cfg.actions)
        for suffix, text in (("txt", render_grid(tab, window)), ("svg", render_svg(tab, window, name))):
            path = cfg.out / f"{name}.{suffix}"
            path.write_text(text, encoding="utf-8")
            written.append(path)
    return written


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=FigureConfig.out)
    p.add_argument("--radius", type=int, default=FigureConfig.radius)
    args = p.parse_args()
    for path in reproduce(FigureConfig(out=args.out, radius=args.radius)):
        print(path)


if __name__ == "__main__":
    main()
