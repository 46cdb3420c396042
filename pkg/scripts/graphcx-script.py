#!/usr/bin/env python3

# USER INSTRUCTIONS:

# STEP 1: CANONICAL FORM OF A GRAPH (file with `V E` header and `s t` lines, or literal V;s>t,...):
# python graphcx-script.py canon "2;1>2,1>2,2>1"
# STEP 2: APPLYING A STRUCTURE MAP:
# python graphcx-script.py alpha --m 1 --n 1 "4;1>2,1>3,1>4,2>3,2>4,3>4"
# STEP 3: VERIFYING THE IDENTITIES ON A CORPUS:
# python graphcx-script.py verify classical --corpus --max-v 4 --max-e 6
# python graphcx-script.py verify shlb --m 2 --n 2 --corpus --max-v 4 --max-e 6
# STEP 4: PAIRING CERTIFICATE:
# python graphcx-script.py --json verify involution --m 1 --n 1 --inputs "4;1>2,1>3,1>4,2>3,2>4,3>4"
# STEP 5: HOMOLOGY:
# python graphcx-script.py homology --max-v 5 --max-e 8 --save path/to/corpus.json

import sys

from graphcx.cli import main

if __name__ == "__main__":
    sys.exit(main())
