from setuptools import find_packages, setup


def read_requirements():
    """读取 requirements.txt 中的运行依赖（测试依赖除外）"""
    with open("requirements.txt", encoding="utf-8") as f:
        lines = [line.strip() for line in f if line.strip() and not line.startswith("#")]
    return [line for line in lines if not line.startswith(("pytest", "hypothesis"))]


setup(
    name="logstrain",
    version="0.1.0",
    description="对数应变弹塑性模型与秩一凸性检验工具",
    packages=find_packages(exclude=["examples", "examples.*", "configs"]),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7.4", "hypothesis>=6.80"]},
    entry_points={"console_scripts": ["logstrain=logstrain.cli:main"]},
)
