from app.main import cli

cli(prog_name="voltarget")
