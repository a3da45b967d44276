import numpy as np

from curvesketch import plotting
from curvesketch.analysis import fixtures as fx
from curvesketch.analysis.classify import ErrorReport
from curvesketch.analysis.verify import verify_theorem_suite
from curvesketch.features import field_raster

PNG = b"\x89PNG\r\n\x1a\n"


def test_figures_render(tmp_path, rng):
    curves = [fx.random_simple_curve(rng) for _ in range(4)]
    plotting.plot_curves(tmp_path / "c.png", curves, ["a", "b", "a", "b"])
    R = field_raster(curves[0], (-1.5, -1.5, 1.5, 1.5), 16, 16, 0.5)
    plotting.plot_field(tmp_path / "f.png", R, (-1.5, -1.5, 1.5, 1.5), curves[0], "x")
    plotting.plot_matrix(tmp_path / "m.png", np.eye(3), ["a", "b", "c"])
    plotting.plot_errors(tmp_path / "e.png", {"s": ErrorReport([0.0, 0.1])})
    plotting.plot_suites(tmp_path / "s.png", [verify_theorem_suite("old_dq", 50, 0)])
    for name in "cfmes":
        assert (tmp_path / f"{name}.png").read_bytes().startswith(PNG)
