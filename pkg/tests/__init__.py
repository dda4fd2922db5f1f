# tox needs this or it can't detect the `test` module