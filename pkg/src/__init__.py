__all__ = ["polyalg", "liealg", "invariance", "gelfand", "contraction", "mlp", "verify", "cli"]
