if True:
	x = 1
	if x:
		y = 2



# just a comment
z = 3
