// Browser entry point: pick the service base URL from the query string
// (?service=http://host:port) and mount the app.

import { createApp } from './app.js'
import { ServiceClient } from './client.js'

const params = new URLSearchParams(window.location.search)
const baseUrl = params.get('service') ?? 'http://127.0.0.1:8000'

const root = document.getElementById('app')
if (root === null) throw new Error('missing #app mount point')

createApp(root, new ServiceClient(baseUrl))
