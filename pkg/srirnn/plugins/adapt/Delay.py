from srirnn.core import AdapterState


class Delay(AdapterState):
    '''
    Integer delay line: the cell sees the state round(M) samples back.
    Exact for integer M, the plain pure-delay path of AdapterState.
    '''
