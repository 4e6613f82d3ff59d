from dualprobe.utils import run_command, dict_to_cli_args

point = {{in.point | repr}}  # pyright: ignore # noqa: E999
sequence = {{in.sequence | repr}}  # pyright: ignore
outfile = {{out.outfile | repr}}  # pyright: ignore
python = {{proc.lang | repr}}  # pyright: ignore
envs = {{envs | repr}}  # pyright: ignore

envs[""] = ["charsub", "member"]
envs["point"] = point
envs["sequence"] = sequence
cmd = [python, "-m", "dualprobe"]
run_command(
    cmd + dict_to_cli_args(envs, prefix="--") + ["--json", "--no-meta"],
    stdout=outfile,
)
