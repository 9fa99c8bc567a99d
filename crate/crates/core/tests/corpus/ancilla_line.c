circuit v=1..3 in=1,2 out=2,3
RZ 1 1/4pi
CZ 1 2
H 3
RZ 3 0+1a0
CZ 2 3
