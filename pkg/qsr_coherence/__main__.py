# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import sys

from qsr_coherence.cli.main import main

sys.exit(main())
