from dualprobe.utils import run_command, dict_to_cli_args

seed = {{in.seed | repr}}  # pyright: ignore # noqa: E999
outfile = {{out.outfile | repr}}  # pyright: ignore
python = {{proc.lang | repr}}  # pyright: ignore
envs = {{envs | repr}}  # pyright: ignore

envs["seed"] = int(seed)
cmd = [python, "-m", "dualprobe", "measure", "--json", "--no-meta"]
run_command(cmd + dict_to_cli_args(envs, prefix="--"), stdout=outfile)
