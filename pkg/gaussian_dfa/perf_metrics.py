""" Stage timing metric logging """
import os
import time
from collections.abc import Iterator
from contextlib import contextmanager

import gaussian_dfa.envs as envs


def create_perf_metric_logger(name: str = "gaussian_dfa"):
    """ Create a performance metric logging object. """
    if envs.GAUSS_DFA_PERF_METRIC_LOGGING_ENABLED == 1:
        return PerfMetricFileLogger(name)
    return PerfMetricLoggerBase(name)


class PerfMetricLoggerBase:
    """ A no-op base class for use when logging is disabled """

    def __init__(self, name: str):
        self.name = name

    def log(self, description: str, value, **kwargs):
        """ Log value with description. kwargs is used as a dictionary of
            additional labels to further describe the logged value. """
        pass

    @contextmanager
    def timed(self, description: str, **kwargs) -> Iterator[None]:
        """ Log the wall time in seconds spent inside the block. """
        start = time.perf_counter()
        try:
            yield
        finally:
            self.log(description, time.perf_counter() - start, **kwargs)


class PerfMetricFileLogger(PerfMetricLoggerBase):
    """ Appends timing records to a text file """

    def __init__(self, name: str):
        super().__init__(name)
        self.time_fmt = "%m-%d %H:%M:%S"
        self.log_path = os.path.join(envs.GAUSS_DFA_PERF_METRIC_LOGGING_DIR,
                                     f"perf_log_{name}.txt")
        # Output configuration variables to ease understanding of logs
        self.log("GAUSS_DFA_SPAN_TOL", envs.GAUSS_DFA_SPAN_TOL)
        self.log("GAUSS_DFA_QUAD_TOL", envs.GAUSS_DFA_QUAD_TOL)
        self.log("GAUSS_DFA_ODE_TOL", envs.GAUSS_DFA_ODE_TOL)
        self.log("GAUSS_DFA_ODE_METHOD", envs.GAUSS_DFA_ODE_METHOD)

    def log(self, description: str, value, **kwargs):
        text = f"{time.strftime(self.time_fmt)}, {description}, {value}"
        for kw in kwargs:
            text += f", {kw}, {kwargs[kw]}"
        text += "\n"
        with open(self.log_path, "a") as f:
            f.write(text)
