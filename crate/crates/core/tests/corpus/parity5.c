circuit v=1..5 in=1,2,3,4,5 out=1,2,3,4,5
H 1
H 2
H 3
H 4
H 5
FANOUT c=5 t=1,2,3,4
H 1
H 2
H 3
H 4
H 5
