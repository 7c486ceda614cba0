package net;

import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.*;

public class Client {
    public SSLContext context() throws Exception {
        SSLContext ctx = SSLContext.getInstance("TLSv1.3");
        ctx.init(null, new TrustManager[] {new Pinning()}, null);
        return ctx;
    }

    public HostnameVerifier verifier() {
        return new HostnameVerifier() {
            public boolean verify(String host, SSLSession session) {
                return host.endsWith(".example.com");
            }
        };
    }

    static class Pinning implements X509TrustManager {
        public void checkClientTrusted(X509Certificate[] chain, String type) throws CertificateException {
            throw new CertificateException("client auth unsupported");
        }

        public void checkServerTrusted(X509Certificate[] chain, String type) throws CertificateException {
            if (chain == null || chain.length == 0) {
                throw new CertificateException("empty chain");
            }
        }

        public X509Certificate[] getAcceptedIssuers() {
            return new X509Certificate[0];
        }
    }
}
