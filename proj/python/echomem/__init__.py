"""Hopfield associative-memory bioacoustic classifier.

Thin re-export of the compiled extension. Typical use:

    import echomem
    model = echomem.train([("PIPI", echomem.read_wav("pipi.wav")),
                           ("PIPY", echomem.read_wav("pipy.wav"))])
    result = echomem.classify(model, echomem.read_wav("fragment.wav"))
    print(result.label, result.iterations)
"""

from ._core import (
    ClassificationResult,
    EncodingConfig,
    FormatError,
    MatchOutcome,
    NetworkTrace,
    PowerSpectrum,
    TrainedModel,
    Waveform,
    WeightMatrix,
    classify,
    classify_files,
    compute_spectrum,
    energy,
    hebbian_train,
    labels,
    load_model,
    match_state,
    read_wav,
    results_to_csv,
    run_to_convergence,
    save_model,
    train,
    write_wav,
)

__all__ = [
    "ClassificationResult",
    "EncodingConfig",
    "FormatError",
    "MatchOutcome",
    "NetworkTrace",
    "PowerSpectrum",
    "TrainedModel",
    "Waveform",
    "WeightMatrix",
    "classify",
    "classify_files",
    "compute_spectrum",
    "energy",
    "hebbian_train",
    "labels",
    "load_model",
    "match_state",
    "read_wav",
    "results_to_csv",
    "run_to_convergence",
    "save_model",
    "train",
    "write_wav",
]
