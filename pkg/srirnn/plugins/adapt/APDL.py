import numpy as np

from srirnn.core import AdapterState


class APDL(AdapterState):
    '''
    All-pass delay line. The fractional part of the delay is a first-order all-pass
    run on the state sequence:

        a[n] = eta (h[n - floor(M)] - a[n-1]) + h[n - floor(M) - 1]

    apf_state holds a[n-1]. Integer M takes the pure delay, where the all-pass
    would be a marginally stable eta = 1 section.
    '''
    def __init__(self, parent, config, section):
        super(APDL, self).__init__(parent, config, section)
        self.eta = self.dtype.type(config.eta)
        self.apf_state = np.zeros(self.width, dtype=self.dtype)

    def reset(self):
        super(APDL, self).reset()
        self.apf_state = np.zeros(self.width, dtype=self.dtype)

    def delayed(self, state):
        if self.method.integer:
            return self.ring.tap(self.method.delay)
        d = self.method.delay
        self.apf_state = self.eta * (self.ring.tap(d) - self.apf_state) + self.ring.tap(d + 1)
        return self.apf_state
