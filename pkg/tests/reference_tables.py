"""Reported sweep results for the two detectors (130-document test set,
29 relevant / 101 irrelevant), used as fixed reference data."""

GRID = (0.001, 0.005, 0.01, 0.05, -0.05, -0.01, -0.005, -0.001)

# coeff, threshold, accuracy, precision, recall, f1
KNN_ROWS = (
    (0.001, 1.415628, 0.576923, 0.345238, 1.000000, 0.513274),
    (0.005, 1.421285, 0.576923, 0.345238, 1.000000, 0.513274),
    (0.010, 1.428356, 0.576923, 0.345238, 1.000000, 0.513274),
    (0.050, 1.484924, 0.576923, 0.345238, 1.000000, 0.513274),
    (-0.050, 1.343503, 0.776923, 0.000000, 0.000000, 0.000000),
    (-0.010, 1.400071, 0.892308, 0.714286, 0.862069, 0.78125),
    (-0.005, 1.407142, 0.784615, 0.509091, 0.965517, 0.666667),
    (-0.001, 1.412799, 0.576923, 0.345238, 1.000000, 0.513274),
)

CBLOF_ROWS = (
    (0.001, 1.004428, 0.807692, 0.540000, 0.931034, 0.683544),
    (0.005, 1.008441, 0.715385, 0.437500, 0.965517, 0.602151),
    (0.010, 1.013458, 0.576923, 0.345238, 1.000000, 0.513274),
    (0.050, 1.053595, 0.576923, 0.345238, 1.000000, 0.513274),
    (-0.050, 0.953253, 0.776923, 0.000000, 0.000000, 0.000000),
    (-0.010, 0.99339, 0.876923, 0.724138, 0.724138, 0.724138),
    (-0.005, 0.998407, 0.900000, 0.722222, 0.896552, 0.800000),
    (-0.001, 1.002421, 0.846154, 0.60000, 0.931034, 0.729730),
)

KNN_MAX_AVERAGE = 1.4142136
CBLOF_MAX_DISTANCE = 1.0034247
N_TEST, N_TEST_RELEVANT, N_TEST_IRRELEVANT = 130, 29, 101


def as_table(method, rows):
    from relevance_sentinel.metrics import MetricsReport
    from relevance_sentinel.sweep import SweepRow, SweepTable

    return SweepTable(method, tuple(SweepRow(c, t, MetricsReport(a, p, r, f)) for c, t, a, p, r, f in rows))
