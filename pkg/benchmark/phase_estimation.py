#!/usr/bin/python3
"""
Run `spinlab estimate` on twin Fock states of growing size and report the sample
variance next to the Cramér-Rao bounds and the shot-noise limit. Prints CSV to stdout.
"""
import json
import os
import signal
import subprocess

os.makedirs("results", exist_ok=True)
ERROR_FILE = open("results/phase_estimation_errors.txt", "a", encoding="utf8")
PARTICLES = [2, 4, 8, 16, 32]
THETA, SHOTS, REPS = 0.3, 200, 400
cmd_spinlab = "spinlab -j 4 estimate"


# https://stackoverflow.com/questions/4789837/how-to-terminate-a-python-subprocess-launched-with-shell-true
def run_command(cmd, timeout, description):
    # The os.setsid() is passed in the argument preexec_fn so
    # it's run after the fork() and before  exec() to run the shell.
    cmd = f'/usr/bin/time -f "%e" {cmd}'
    with subprocess.Popen(
        cmd,
        text=True,
        shell=True,
        preexec_fn=os.setsid,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    ) as process:
        try:
            stdout, stderr = process.communicate(None, timeout=timeout)
        except subprocess.TimeoutExpired as exc:
            process.kill()
            os.killpg(os.getpgid(process.pid), signal.SIGTERM)
            process.wait()
            print(f'Timeout expired for command "{cmd}"', file=ERROR_FILE)
            if exc.stderr is not None:
                print(exc.stderr.decode("utf-8"), file=ERROR_FILE, flush=True)
            return None
        except:  # Including KeyboardInterrupt, communicate handled that.
            process.kill()
            os.killpg(os.getpgid(process.pid), signal.SIGTERM)
            raise
        retcode = process.poll()
    if retcode != 0:
        print(f"{description} finished with error code {retcode}.", file=ERROR_FILE)
        print(stderr, file=ERROR_FILE, flush=True)
        return None
    # /usr/bin/time writes the elapsed time on the last line of stderr.
    return json.loads(stdout), float(stderr.strip().splitlines()[-1])


def run_spinlab(n, seed):
    desc = f"spinlab estimate(n={n}, seed={seed})"
    args = f"-s fock:{n}:{n // 2} --theta {THETA} -M {SHOTS} -R {REPS} --seed {seed}"
    return run_command(f"{cmd_spinlab} {args}", 600, desc)


def __main__():
    # Print CSV header
    print("n,seed,variance,crb_classical,crb_quantum,shot_noise,real", flush=True)
    for n in PARTICLES:
        for seed in range(3):
            res = run_spinlab(n, seed)
            if res is None:
                continue
            out, real = res
            r = out["outputs"]
            print(
                f"{n:3d},{seed:1d},{r['sample_variance']:.4e},{r['crb_classical']:.4e},"
                f"{r['crb_quantum']:.4e},{r['shot_noise']:.4e},{real:6.2f}",
                flush=True,
            )


if __name__ == "__main__":
    __main__()
