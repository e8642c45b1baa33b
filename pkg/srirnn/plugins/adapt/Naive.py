from srirnn.core import AdapterState


class Naive(AdapterState):
    '''
    Runs the recursion unchanged at the new rate: the cell always sees the previous state.
    '''
    def delayed(self, state):
        return state
