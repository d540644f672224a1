"""Polarization-multiplexed hologram laboratory (Python bindings)."""

from ._qholo import (
    TargetHologram,
    ValidationError,
    contrast,
    dft2,
    heralded_map,
    ideal_image_pitch,
    idft2,
    intensity_drop,
    lens_phase,
    letter_means,
    make_hdva_target,
    modified_gs,
    no_eraser_map,
    pearson,
    poisson_draw,
    propagate,
    reconstruct,
    simulate_frames,
    sweep_step_map,
    synthesize,
    visibility_fit,
)

__all__ = [
    "TargetHologram",
    "ValidationError",
    "contrast",
    "dft2",
    "heralded_map",
    "ideal_image_pitch",
    "idft2",
    "intensity_drop",
    "lens_phase",
    "letter_means",
    "make_hdva_target",
    "modified_gs",
    "no_eraser_map",
    "pearson",
    "poisson_draw",
    "propagate",
    "reconstruct",
    "simulate_frames",
    "sweep_step_map",
    "synthesize",
    "visibility_fit",
]
