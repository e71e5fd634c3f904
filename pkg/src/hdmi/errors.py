"""Error taxonomy shared across the package.

DataFormatError covers malformed or contract-violating inputs (bad files,
schema violations, invalid outcome columns); DegenerateInputError covers
numerically unusable data (constant columns, empty classes, k >= n).
The CLI maps them to distinct exit codes.
"""


class HdmiError(Exception):
    pass


class DataFormatError(HdmiError):
    pass


class DegenerateInputError(HdmiError):
    pass
