"""
Custom exceptions for the quantum-walk simulator with helpful error messages and suggestions.
"""


class QuantumWalkError(Exception):
    """Base exception class for all simulator errors."""

    def __init__(self, message: str, suggestion: str = ""):
        self.message = message
        self.suggestion = suggestion
        full_message = message
        if suggestion:
            full_message = f"{message}\n💡 Suggestion: {suggestion}"
        super().__init__(full_message)


class InvalidCoinError(QuantumWalkError):
    """Raised when coin parameters do not define a unitary 2×2 coin."""

    def __init__(self, reason: str, residuals: dict[str, float] | None = None):
        message = f"Invalid coin parameters: {reason}"
        if residuals:
            details = ", ".join(f"{name}={value:.3e}" for name, value in residuals.items())
            message += f" ({details})"
        suggestion = (
            "1. Check that |a|²+|b|² = 1 and |Δ| = 1\n"
            "2. Derive c and d from c = -Δb*, d = Δa* instead of passing them by hand\n"
            "3. Use the hadamard or delta coin presets when in doubt"
        )
        super().__init__(message, suggestion)
        self.residuals = residuals or {}


class InvalidStateError(QuantumWalkError):
    """Raised when a walk or field state is malformed."""

    def __init__(self, reason: str):
        message = f"Invalid state: {reason}"
        suggestion = (
            "1. Make sure |α|²+|β|² = 1 for the initial coin state\n"
            "2. Keep the origin inside the circle index range -M..M\n"
            "3. Build states through initial_state() rather than by hand"
        )
        super().__init__(message, suggestion)


class TopologyError(QuantumWalkError):
    """Raised when a topology or a ring-shaped support is inconsistent."""

    def __init__(self, reason: str):
        message = f"Topology error: {reason}"
        suggestion = (
            "1. Circle topologies need M ≥ 1 (2M+1 sites)\n"
            "2. The EOM-bar only acts on fields supported inside its ring"
        )
        super().__init__(message, suggestion)


class CavityConfigurationError(QuantumWalkError):
    """Raised when a cavity configuration or field/cavity pairing is invalid."""

    def __init__(self, reason: str):
        message = f"Invalid cavity configuration: {reason}"
        suggestion = (
            "1. Polarization designs need polarization cebits, path designs need path cebits\n"
            "2. The bidirectional design needs hybrid cebits\n"
            "3. f must be a positive integer"
        )
        super().__init__(message, suggestion)


class PredictionUndefinedError(QuantumWalkError):
    """Raised when an asymptotic moment formula is singular for the given coin."""

    def __init__(self, formula: str, reason: str):
        message = f"The {formula} prediction is undefined: {reason}"
        suggestion = (
            "1. Coins with |a| ≈ 0 are pure swaps; the walker oscillates without spreading\n"
            "2. δ = π/2 gives a zero-spread Galton board; pick δ away from π/2"
        )
        super().__init__(message, suggestion)


class ConfigurationError(QuantumWalkError):
    """Raised when a run configuration (CLI flags or manifest) is invalid."""

    def __init__(self, config_key: str, original_error: str = ""):
        message = f"Configuration error: {config_key}"
        if original_error:
            message += f" ({original_error})"
        suggestion = (
            f"1. Check the value given for {config_key}\n"
            f"2. Complex numbers are passed as flat re/im pairs\n"
            f"3. Compare with the manifests in presets/\n"
            f"4. Run with --help for the list of accepted flags"
        )
        super().__init__(message, suggestion)


class OutputError(QuantumWalkError):
    """Raised when writing run artifacts fails."""

    def __init__(self, path: str, original_error: str = ""):
        message = f"Failed to write {path}"
        if original_error:
            message += f": {original_error}"
        suggestion = (
            "1. Verify the output directory exists or can be created\n"
            "2. Check file permissions and free disk space"
        )
        super().__init__(message, suggestion)
