circuit v=1..4 in=1,2,3,4 out=1,2,3,4
FANOUT c=4 t=1,2,3
