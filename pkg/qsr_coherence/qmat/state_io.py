# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Reading and writing state files.
#
# Density operator: {"registers": [{"label": "R", "dim": 2}, ...], "matrix": [[[re, im], ...], ...]}
# State vector:     {"registers": [...], "amplitudes": [[re, im], ...]}
#

import json
from typing import List, Union

import numpy as np

from qsr_coherence.errors import StateFileError
from qsr_coherence.qmat.registers import TAU_HERM, TAU_NORM, TAU_PSD, DensityOperator, RegisterSystem, StateVector

REGISTERS = "registers"
MATRIX = "matrix"
AMPLITUDES = "amplitudes"


def validate_state_dict(data) -> List[str]:
    """
    Checks a decoded state file.
    Args:
        data: the object decoded from the JSON file

    Returns: a list of string messages if errors were detected, an empty list otherwise
    """
    if not isinstance(data, dict):
        return [f"Expected a JSON object at top level, got {type(data).__name__}"]
    all_errors = []
    all_errors += _check_keys(data)
    if not all_errors:
        all_errors += _check_registers(data[REGISTERS])
    if not all_errors:
        dim = int(np.prod([reg["dim"] for reg in data[REGISTERS]], dtype=np.int64))
        if MATRIX in data:
            all_errors += _check_matrix(data[MATRIX], dim)
        else:
            all_errors += _check_amplitudes(data[AMPLITUDES], dim)
    return all_errors


def _check_keys(data):
    errors = []
    if REGISTERS not in data:
        errors.append(f"Missing key '{REGISTERS}'")
    if MATRIX in data and AMPLITUDES in data:
        errors.append(f"Expected exactly one of '{MATRIX}' and '{AMPLITUDES}', got both")
    elif MATRIX not in data and AMPLITUDES not in data:
        errors.append(f"Missing key '{MATRIX}' or '{AMPLITUDES}'")
    return errors


def _check_registers(registers):
    errors = []
    if not isinstance(registers, list):
        return [f"'{REGISTERS}' must be a list"]
    labels = []
    for i, reg in enumerate(registers):
        if not isinstance(reg, dict) or "label" not in reg or "dim" not in reg:
            errors.append(f"Register {i} must be an object with 'label' and 'dim'")
            continue
        if not isinstance(reg["dim"], int) or isinstance(reg["dim"], bool) or reg["dim"] < 1:
            errors.append(f"Register {reg['label']} has invalid dimension {reg['dim']}")
        labels.append(reg["label"])
    duplicates = sorted({label for label in labels if labels.count(label) > 1})
    if duplicates:
        errors.append(f"Duplicate register labels: {duplicates}")
    return errors


def _parse_complex_list(entries, where):
    values = []
    for j, entry in enumerate(entries):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
            raise ValueError(f"{where}, entry {j}: expected [re, im], got {entry!r}")
        values.append(complex(entry[0], entry[1]))
    return values


def _check_amplitudes(amplitudes, dim):
    if not isinstance(amplitudes, list):
        return [f"'{AMPLITUDES}' must be a list"]
    if len(amplitudes) != dim:
        return [f"Expected {dim} amplitudes, got {len(amplitudes)}"]
    try:
        values = np.array(_parse_complex_list(amplitudes, "amplitudes"))
    except ValueError as e:
        return [str(e)]
    norm = float(np.linalg.norm(values))
    if abs(norm - 1.0) > TAU_NORM:
        return [f"Amplitudes have norm {norm}, expected 1"]
    return []


def _check_matrix(matrix, dim):
    if not isinstance(matrix, list) or len(matrix) != dim:
        return [f"Expected a {dim}x{dim} matrix"]
    rows = []
    for i, row in enumerate(matrix):
        if not isinstance(row, list) or len(row) != dim:
            return [f"Row {i} must have {dim} entries"]
        try:
            rows.append(_parse_complex_list(row, f"row {i}"))
        except ValueError as e:
            return [str(e)]
    values = np.array(rows)
    errors = []
    asym = float(np.max(np.abs(values - values.conj().T)))
    if asym > TAU_HERM:
        errors.append(f"Matrix is not Hermitian (deviation {asym})")
    else:
        smallest = float(np.min(np.linalg.eigvalsh(values)))
        if smallest < -TAU_PSD:
            errors.append(f"Matrix has negative eigenvalue {smallest}")
    trace = float(np.real(np.trace(values)))
    if abs(trace - 1.0) > TAU_NORM:
        errors.append(f"Matrix has trace {trace}, expected 1")
    return errors


def state_from_dict(data, path: str = "<memory>") -> Union[DensityOperator, StateVector]:
    errors = validate_state_dict(data)
    if errors:
        raise StateFileError(path, errors)
    system = RegisterSystem((reg["label"], reg["dim"]) for reg in data[REGISTERS])
    if MATRIX in data:
        matrix = np.array([[complex(re, im) for re, im in row] for row in data[MATRIX]])
        return DensityOperator(system, matrix)
    return StateVector(system, [complex(re, im) for re, im in data[AMPLITUDES]])


def load_state(path: str) -> Union[DensityOperator, StateVector]:
    """
    Loads a state file. Decoding and validation problems raise StateFileError with
    every diagnostic found.
    """
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise StateFileError(path, [f"JSON parse error at line {e.lineno} column {e.colno}: {e.msg}"])
    return state_from_dict(data, path)


def _complex_pairs(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def state_to_dict(state: Union[DensityOperator, StateVector]) -> dict:
    data = {REGISTERS: [{"label": label, "dim": dim} for label, dim in state.system]}
    if isinstance(state, StateVector):
        data[AMPLITUDES] = _complex_pairs(state.amplitudes)
    else:
        data[MATRIX] = [_complex_pairs(row) for row in state.matrix]
    return data


def save_state(state: Union[DensityOperator, StateVector], path: str):
    # json writes floats with repr, which round-trips all 17 significant digits
    with open(path, "w") as f:
        json.dump(state_to_dict(state), f)
