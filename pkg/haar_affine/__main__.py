import sys

from haar_affine.main import main

sys.exit(main())
