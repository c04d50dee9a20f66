from qcat.cli import cli

cli(prog_name="qcat")
