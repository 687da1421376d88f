def rel_err(actual: float, reference: float) -> float:
    return abs(actual - reference) / max(abs(reference), 1e-300)
