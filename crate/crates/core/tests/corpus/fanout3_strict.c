circuit v=1..6,10..13,17..28 in=1,2,3 out=17,18,19
H 4
H 5
H 6
H 10
H 11
H 12
H 13
H 17
H 18
H 19
CZ 1 4
CZ 2 5
CZ 3 6
CZ 11 12
CZ 13 19
CZ 6 10
CZ 5 12
CZ 4 17
H 1
H 2
H 3
CZ 4 10
CZ 12 13
CZ 5 18
H 6
CZ 1 17
CZ 10 11
H 12
H 4
H 5
H 13
CZ 2 18
H 10
H 11
H 17
H 20
CZ 17 20
H 20
CZ 4 17
CZ 6 20
H 20
CZ 17 20
H 20
H 17
H 23
CZ 21 23
H 23
H 21
CZ 19 21
H 21
H 22
H 23
CZ 19 22
CZ 21 23
H 22
H 23
H 24
CZ 19 24
H 24
CZ 1 19
CZ 2 21
CZ 3 22
CZ 10 23
CZ 12 24
H 23
CZ 21 23
H 23
H 21
CZ 19 21
H 21
H 22
H 23
CZ 19 22
CZ 21 23
H 22
H 23
H 24
CZ 19 24
H 24
H 18
H 25
CZ 18 25
H 25
H 26
CZ 18 26
H 26
CZ 5 18
CZ 6 25
CZ 11 26
H 25
CZ 18 25
H 25
H 26
CZ 18 26
H 26
H 18
H 19
H 27
CZ 19 27
H 27
H 28
CZ 19 28
H 28
CZ 6 19
CZ 11 27
CZ 13 28
H 27
CZ 19 27
H 27
H 28
CZ 19 28
H 28
H 19
