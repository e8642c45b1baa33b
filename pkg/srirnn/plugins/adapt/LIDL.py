from srirnn.core import AdapterState


class LIDL(AdapterState):
    '''
    Linearly interpolated delay line:

        (1 - delta) h[n - floor(M)] + delta h[n - floor(M) - 1]
    '''
    def __init__(self, parent, config, section):
        super(LIDL, self).__init__(parent, config, section)
        self.near = self.dtype.type(1.0 - config.delta)
        self.far = self.dtype.type(config.delta)

    def delayed(self, state):
        if self.method.integer:
            return self.ring.tap(self.method.delay)
        d = self.method.delay
        return self.near * self.ring.tap(d) + self.far * self.ring.tap(d + 1)
