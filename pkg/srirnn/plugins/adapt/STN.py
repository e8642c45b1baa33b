from srirnn.core import AdapterState


class STN(AdapterState):
    '''
    Treats the cell as a forward-Euler step and shortens it to 1/M of a step:

        h[n] = (1 - 1/M) h[n-1] + (1/M) f(h[n-1], x[n])

    applied to the full concatenated state.
    '''
    def __init__(self, parent, config, section):
        super(STN, self).__init__(parent, config, section)
        self.keep = self.dtype.type(1.0 - 1.0 / config.M)
        self.gain = self.dtype.type(1.0 / config.M)
        self.log.debug("STN residual gain %r" % self.gain)

    def delayed(self, state):
        return state

    def blend(self, state, fresh):
        return self.keep * state + self.gain * fresh
