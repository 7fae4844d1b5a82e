import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__ == "test_acceptance":
        label = getattr(item.function, "criterion", item.name)
        status = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {label}: {status}")
