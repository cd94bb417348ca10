// platzhalter
