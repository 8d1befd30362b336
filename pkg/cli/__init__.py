"""
Command-line front end for qee-witness, built with Typer.
"""
