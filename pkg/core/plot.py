"""SVG rendering of cylinder developments with matplotlib."""

import io

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.config import get_settings  # noqa: E402
from core.osculate import DevelopedCurve, OsculatingDarboux  # noqa: E402

SVG_POINTS_PER_INCH = 72.0
MARGIN = 0.5


def development_svg(
    curve: DevelopedCurve,
    osculating: OsculatingDarboux | None = None,
    title: str = '',
) -> str:
    """Draws the development (u rightward, z upward) as SVG text.

    Args:
        curve (DevelopedCurve): Sampled development.
        osculating (OsculatingDarboux, optional): Sine curve drawn over the
            same u range, with the contact point marked.
        title (str): Figure title.

    Returns:
        str: SVG document; identical inputs give identical bytes.
    """
    scale = get_settings().svg_scale
    u, z = curve.u, curve.z
    curves = [(u, z)]
    if osculating is not None:
        curves.append((u, osculating.developed_height(u)))
    z_all = np.concatenate([c[1] for c in curves])
    width = float(np.ptp(u)) + 2 * MARGIN
    height = float(np.ptp(z_all)) + 2 * MARGIN

    matplotlib.rcParams['svg.hashsalt'] = 'motionkit'
    fig, ax = plt.subplots(
        figsize=(width * scale / SVG_POINTS_PER_INCH, height * scale / SVG_POINTS_PER_INCH)
    )
    ax.plot(u, z, color='black', linewidth=1.0, label='development')
    if osculating is not None:
        ax.plot(curves[1][0], curves[1][1], color='tab:blue', linewidth=1.0,
                linestyle='--', label=f'osculating sine, a = {osculating.amplitude:.4g}')
        u0 = osculating.contact_parameter
        ax.plot([u0], [osculating.developed_height(u0)], marker='o', color='tab:red')
        ax.legend(loc='upper right', fontsize='small')
    ax.axhline(0.0, color='gray', linewidth=0.5)
    ax.set_xlim(float(u.min()) - MARGIN, float(u.max()) + MARGIN)
    ax.set_ylim(float(z_all.min()) - MARGIN, float(z_all.max()) + MARGIN)
    ax.set_aspect('equal')
    ax.set_xlabel('u')
    ax.set_ylabel('z')
    if title:
        ax.set_title(title)

    buffer = io.StringIO()
    fig.savefig(buffer, format='svg', metadata={'Date': None})
    plt.close(fig)
    return buffer.getvalue()
