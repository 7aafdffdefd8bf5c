"""
app.py

thermoformal command-line entry point

    python app.py spectral --model models/f2_zero.json
    python app.py minmax --model models/b211.json --restarts 8 --seed 7 --format text
"""

from dotenv import load_dotenv

from src.cli import main

# THERMOFORMAL_LOG, THERMOFORMAL_*_TOL ...
load_dotenv()


if __name__ == "__main__":
    main()
