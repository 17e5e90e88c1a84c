"""Build the _oacm extension through the project's CMake tree."""

import pathlib
import shutil
import subprocess

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source = pathlib.Path(__file__).resolve().parent
        build_dir = source / "build_py"
        build_dir.mkdir(exist_ok=True)
        subprocess.run(
            ["cmake", "-S", str(source), "-B", str(build_dir),
             "-DCMAKE_BUILD_TYPE=Release"],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_oacm", "-j2"],
            check=True,
        )
        built = sorted(build_dir.glob("_oacm*.so"))
        if not built:
            raise RuntimeError("CMake did not produce the _oacm module")
        target = pathlib.Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], target)


setup(
    ext_modules=[CMakeExtension("oacm._oacm")],
    cmdclass={"build_ext": CMakeBuild},
)
