from reflecto.main import app

app(prog_name="reflecto")
