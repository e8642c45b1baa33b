import numpy as np

from srirnn.core import AdapterState


class CIDL(AdapterState):
    '''
    Cubic Lagrange interpolated delay line over the taps gamma .. gamma+3 samples back:

        sum_k l[k] h[n - k - gamma]
    '''
    def __init__(self, parent, config, section):
        super(CIDL, self).__init__(parent, config, section)
        self.kernel = np.asarray(config.kernel, dtype=self.dtype)

    def delayed(self, state):
        if self.method.integer:
            return self.ring.tap(self.method.delay)
        return self.kernel @ self.ring.taps(self.method.gamma, 4)
