"""
Executable module entry point for hetanova
This file is executed when running 'python -m hetanova'
"""

from hetanova.cli.main import main

if __name__ == "__main__":
    main()
